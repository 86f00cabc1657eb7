#pragma once

#include <string>
#include <vector>

#include "cornex/data.hpp"
#include "cornex/defaults.hpp"
#include "cornex/geometry.hpp"
#include "cornex/grid.hpp"
#include "cornex/regularity.hpp"

namespace cornex {

struct ExpansionGridSpec {
  int corner_nodes = defaults::corner_nodes;
  int tangential_nodes = defaults::tangential_nodes;
  double half_length = 0;             // corner axes; 0: box_factor * local_radius
  double tangential_half_length = 0;  // 0: tangential_box_factor * local_radius
};

/// Node-centered corner axes and periodic tangential axes on [-L, L).
TensorGrid make_expansion_grid(const ProductDomainSpec& domain, const ExpansionGridSpec& spec);

/// Degree bookkeeping of v_j = chi p_j / (sum a eta^2)^{3j+1}.
struct TermMeta {
  int index = 0;
  int denominator_power = 1;    // 3j + 1
  int eta_degree_bound = 0;     // 5j
  int reduced_denominator = 1;  // j + 1
  int reduced_degree = 0;       // j
  std::vector<Parity> parity;   // per corner axis, in eta

  static TermMeta for_index(int j, int q);
};

/// One v_j, spectral in the corner axes and physical in the tangential axes.
struct ExpansionTerm {
  int index = 0;
  SpectralField data;
  TermMeta meta;
};

/// Grid, geometry and cutoff shared by every stage of the recursion.
class ExpansionContext {
 public:
  ExpansionContext(const ProductDomainSpec& domain, const ExpansionGridSpec& spec);
  ExpansionContext(const ProductDomainSpec& domain, const TensorGrid& grid, const CutoffSpec& cutoff);

  const TransformData& transform() const { return transform_; }
  const ProductDomainSpec& domain() const { return transform_.domain(); }
  const TensorGrid& grid() const { return grid_; }
  const CutoffSpec& cutoff() const { return cutoff_; }
  void set_cutoff(const CutoffSpec& c) { cutoff_ = c; }
  int q() const { return grid_.q(); }
  std::vector<int> corner_axes() const;
  std::vector<int> tangential_axes() const;
  /// Flat index of the tangential part of a grid index.
  std::size_t tangential_index(std::size_t flat) const { return flat % tangential_size_; }
  /// a_i at tangential slot s.
  double a(int i, std::size_t s) const { return a_[i][s]; }
  /// d phi_i / d t_m at slot s, m local to factor i.
  double grad_phi(int i, int m, std::size_t s) const { return grad_[i][m][s]; }
  double lap_phi(int i, std::size_t s) const { return lap_[i][s]; }
  bool factor_flat(int i) const { return flat_[i]; }
  /// Multiplies by chi(eta) / (-sum a_i eta_i^2); zero where chi vanishes.
  SpectralField invert_principal(const SpectralField& F) const;
  double trace_tol = defaults::trace_tol;

 private:
  void precompute();
  TransformData transform_;
  TensorGrid grid_;
  CutoffSpec cutoff_;
  std::size_t tangential_size_ = 1;
  std::vector<std::vector<double>> a_, lap_;
  std::vector<std::vector<std::vector<double>>> grad_;
  std::vector<bool> flat_;
};

/// (phi f) sampled in model coordinates on the whole grid. The commutator
/// [Delta', phi] u is not included.
GridFunction localize(const DataFunction& f, const ExpansionContext& ctx);

/// Odd extension across every corner plane; `jump` receives the largest trace cleared.
GridFunction odd_extension(const GridFunction& h, double* jump = nullptr);

/// Largest |v(y_k = 0)| over corner planes, relative to max |v|; v physical on corner axes.
double corner_trace(const FieldData& v);

/// Pieces of K v: the tangential part -Delta_t v and, per corner axis,
/// i eta_i (b_i v^{e_i})~.
struct KParts {
  SpectralField c_part;
  std::vector<SpectralField> b_parts;
  SpectralField total() const;
};

/// K v for v spectral in the corner axes. Throws TraceError on nonzero traces.
KParts apply_K_parts(const ExpansionContext& ctx, const SpectralField& v);
SpectralField apply_K(const ExpansionContext& ctx, const SpectralField& v);

/// v0 = chi h~ / (-sum a eta^2) for the odd-extended data h.
ExpansionTerm compute_v0(const ExpansionContext& ctx, const GridFunction& h_odd);
/// v_{j+1} = chi (K v_j)~ / (-sum a eta^2).
ExpansionTerm iterate(const ExpansionContext& ctx, const ExpansionTerm& v);

struct StructuralReport {
  int index = 0;
  std::vector<double> oddness;  // per corner axis
  double trace = 0;
  double tangential_exponent = 0;  // of (1 + |xi|^2)^{-j} v_j
  bool tangential_capped = false;
  int denominator_power = 0;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

StructuralReport structural_check(const ExpansionContext& ctx, const ExpansionTerm& v,
                                  double requested_order = defaults::tangential_order);

struct ExpansionSeries {
  GridFunction h;          // odd-extended localized data
  SpectralField h_tilde;
  double boundary_jump = 0;
  std::vector<ExpansionTerm> terms;
  std::vector<std::string> provenance;
};

ExpansionSeries build_series(const ExpansionContext& ctx, const DataFunction& f, int depth);
ExpansionSeries build_series(const ExpansionContext& ctx, const GridFunction& h_odd, int depth);

/// Tail-fit window [2 r1, Nyquist / 2] over the corner frequencies.
std::pair<double, double> tail_window(const ExpansionContext& ctx);

/// Solve of P0 w = F with the symbol frozen at the corner, fully spectral.
SpectralField frozen_solve(const ExpansionContext& ctx, const SpectralField& forcing);

struct ResidualResult {
  int depth = 0;
  SpectralField forcing;        // corner-spectral
  RegularityReport forcing_report;
  RegularityReport remainder_report;  // frozen-coefficient proxy
};

/// Right side of the remainder equation: K v_N + (1 - chi)(h~ + sum_{j<N} K v_j).
ResidualResult residual(const ExpansionContext& ctx, const ExpansionSeries& series, int N);

/// Symbol shapes eta-degree / denominator power / xi-degree with the data
/// extension pattern, assembled symbolically from the geometry flags.
struct SymbolShape {
  int eta_degree = 0;
  int denominator_power = 1;
  int xi_degree = 0;
  std::vector<Parity> data;  // extension of the data factor per corner axis
  int order() const { return eta_degree - 2 * denominator_power; }
  auto operator<=>(const SymbolShape&) const = default;
};

struct DegreeLedger {
  std::vector<std::vector<SymbolShape>> levels;
  int max_degree(int j) const;
  int max_power(int j) const;
  int max_order(int j) const;
};

/// Flags per corner axis: a_i varies with t, b_i nonzero.
DegreeLedger degree_ledger(const std::vector<bool>& a_varies, const std::vector<bool>& b_nonzero, int depth);
DegreeLedger degree_ledger(const ExpansionContext& ctx, int depth);

}  // namespace cornex
