#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "cornex/grid.hpp"

namespace cornex {

enum class Signature { Bounded, LogDivergent, PowerDivergent, Insufficient };

std::string to_string(Signature s);

/// Growth of m-th differences against distance r.
struct OrderGrowth {
  int order = 0;
  double slope = 0;        // d log D / d log r
  double log_coeff = 0;    // b in D = a + b log(1/r) + c r
  double log_stderr = 0;
  double fit_r2 = 0;       // of the log-log line
  Signature signature = Signature::Insufficient;
};

struct TailFit {
  double exponent = 0;  // E(R) ~ R^{-exponent}
  double r2 = 0;
  bool capped = false;
};

struct RegularityReport {
  std::string id;
  double tail_exponent = 0;
  double tail_fit_r2 = 0;
  bool tail_capped = false;
  double sobolev_index = 0;       // tangential frequencies limited to a fixed band
  double sobolev_index_full = 0;  // all frequencies
  std::vector<OrderGrowth> orders;
  bool proxy = false;  // measured on a frozen-coefficient proxy
  std::string note;

  bool bounded_through(int m) const;
  /// Strongest signature over orders <= m.
  Signature worst_through(int m) const;
};

/// Ordinary least squares; returns coefficients, fills stderr and r2 when given.
std::vector<double> least_squares(const std::vector<std::vector<double>>& columns, const std::vector<double>& y,
                                  std::vector<double>* stderr_out = nullptr, double* r2 = nullptr);

/// Classifies samples D(r_k) > 0 taken at distances r_k.
OrderGrowth classify_growth(int order, const std::vector<double>& r, const std::vector<double>& D);

/// Slope fit of log E(R), E(R) = || F on {|zeta| >= R} || with zeta the
/// frequencies of `axes` (spectral corner axes when empty), R geometric in [r_lo, r_hi].
TailFit tail_exponent(const SpectralField& F, double r_lo, double r_hi, int samples, double cap,
                      const std::vector<int>& axes = {});

/// Sobolev index estimate for a field spectral on every axis: the s at which
/// the weighted energy of (1 + |zeta|^2)^s |F|^2 on the shell [r_hi/2, r_hi]
/// stops falling below that of [r_hi/4, r_hi/2]. Bisection on [lo, hi].
/// Frequencies with tangential part |xi| > xi_band are left out.
double sobolev_index(const SpectralField& F, double r_hi, double lo, double hi, double xi_band = INFINITY);

/// Growth of m-th one-sided differences along a corner axis as the plane
/// {y_axis = 0} is approached from y_axis > 0, max over the other coordinates
/// within `window` of the origin.
OrderGrowth plane_growth(const GridFunction& u, int axis, int order, double window);

}  // namespace cornex
