#pragma once

#include <complex>
#include <string>
#include <vector>

#include "cornex/defaults.hpp"
#include "cornex/singular.hpp"

namespace cornex {

/// Bounded-difference statistics of a remainder near the corner on two grids.
struct SmoothRemainderMeasure {
  std::vector<int> orders;
  std::vector<double> coarse;     // max |m-th difference| / h^m, coarse grid
  std::vector<double> fine;       // same on the fine grid
  std::vector<double> reference;  // same for the subtracted singular part, fine grid
  std::vector<bool> certified;
  double variation_tol = defaults::smooth_variation_tol;
  double floor_ratio = defaults::smooth_floor_ratio;

  bool certified_through(int m) const;
};

/// Decides certification per order: growth below tol from coarse to fine, or the
/// fine-grid value below floor_ratio times the singular reference.
void certify(SmoothRemainderMeasure& m);

struct FtGrid {
  int nodes = 512;
  double band = 30;  // upper edge of the fit annulus and of the remainder window
};

struct FtCheckConfig {
  FtGrid coarse{512, 30}, fine{1024, 60};
  double half_length = 8;
  double cutoff_center = 3.5;  // spatial erfc taper
  double cutoff_width = 1.0;
  double ring_lo = 10;         // lower edge of the fit annulus
  double axis_r0 = 2, axis_r1 = 4;  // per-axis frequency cutoff chi_{eta_i}
  std::vector<int> orders{1, 2, 3, 4};
  int probe_half_width = 3;    // nodes on each side of the corner for differences
  double residual_tol = defaults::ft_residual_tol;  // relative least-squares residual on the annulus
  double stability_tol = defaults::ft_stability_tol;
};

FtCheckConfig default_ft_config(int dims);

struct FtFit {
  cplx c = 0;
  double residual = 0;
  double parity_error = 0;
  std::size_t points = 0;
  std::vector<double> diff_remainder, diff_singular;
};

struct FtCheckResult {
  std::string id;
  FtFit coarse, fine;
  double stability = 0;  // |c_fine - c_coarse| / |c_fine|
  SmoothRemainderMeasure remainder;
  bool passed = false;
  std::string note;
};

/// Target symbol 1/(eta^k (sum a eta^2)^l) at a frequency point.
cplx ft_target(const SingularFunction& phi, const double* eta);

FtFit ft_fit(const SingularFunction& phi, const FtCheckConfig& cfg, const FtGrid& grid, bool measure);
FtCheckResult ft_check(const SingularFunction& phi, const FtCheckConfig& cfg);

/// Fitted constant c(l, k) = i^{|k|} c(l, 0), with c(l, 0) fitted once per
/// (|p|, l, a) on the coarse default grid and cached.
cplx normalization_constant(int dims, int l, const std::vector<int>& k, const std::vector<double>& a);

}  // namespace cornex
