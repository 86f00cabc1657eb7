#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "cornex/data.hpp"
#include "cornex/expansion.hpp"
#include "cornex/ft_check.hpp"
#include "cornex/singular.hpp"

namespace cornex {

/// Taylor jet of h = phi f in the corner variables at the model point y.
Jet localized_jet(const ProductDomainSpec& domain, const DataFunction& f, const double* y,
                  const std::vector<int>& orders);

/// d^alpha h at y_corner = 0 and tangential offset t (corner point when t is null).
double trace_value(const ProductDomainSpec& domain, const DataFunction& f, const std::vector<int>& alpha,
                   const double* t = nullptr);
/// (-Delta_t)^j of the trace profile at the corner; fourth-order differences with step h.
double trace_laplacian_power(const ProductDomainSpec& domain, const DataFunction& f, const std::vector<int>& alpha,
                             int j, double h = 0.02);

/// weight * value / prod_i (i eta_i)^{k_i}, k = alpha + 1.
struct TraceEntry {
  std::vector<int> alpha;
  double value = 0;
  double weight = 1;  // product of -2 (odd extension) and +2 (even extension)
  std::vector<int> k;
};

/// (1 / (i eta_axis)^order) times the transform of d_axis^order d^prefix h with
/// the earlier axes at zero.
struct RemainderEntry {
  int axis = 0;
  std::vector<int> prefix;
  int order = 0;
};

struct IbpLedger {
  int N = 0;
  int order = 0;  // 2 (N + q)
  std::vector<Parity> extension;
  std::vector<TraceEntry> traces;
  std::vector<RemainderEntry> remainders;
  cplx trace_symbol(const double* eta) const;
};

/// Integration by parts in y_1, ..., y_q of the extended data; odd extension by default.
IbpLedger ibp_expand(const ProductDomainSpec& domain, const DataFunction& f, int N,
                     std::vector<Parity> extension = {});

/// q = 2: max relative deviation of traces + remainders from the transform of
/// the extended data at the given corner frequencies, all transforms by Gauss
/// quadrature at the corner point.
double ibp_reconstruction_error(const ProductDomainSpec& domain, const DataFunction& f, const IbpLedger& ledger,
                                const std::vector<std::array<double, 2>>& etas);

/// One summand of v_j with coefficients frozen at the corner:
/// coef eta^beta (|xi|^2)^lap h~^{ext} / (sum a eta^2)^l.
struct SymbolTerm {
  cplx coef = 1;
  std::vector<Parity> ext;
  std::vector<int> beta;
  int l = 1;
  int lap = 0;
  int index = 0;
  std::string provenance;
};

/// Descriptors of v_0, ..., v_N. The even re-extension in K is carried by
/// flipping the data extension of that axis.
std::vector<std::vector<SymbolTerm>> term_descriptors(const TransformData& transform, int N);

struct MatchedTerm {
  cplx c = 0;
  SingularFunction basis;
  std::vector<double> profile;  // c at the tangential sample offsets, when requested
  std::vector<std::string> provenance;
  int strength() const { return basis.strength(); }
  std::string id() const { return basis.id(); }
};

/// Trace lookup: (-Delta_t)^lap d^alpha h at the corner.
using TraceFn = std::function<double(const std::vector<int>& alpha, int lap)>;

struct MatchOptions {
  int max_strength = 4;
  int max_trace_order = 8;  // per axis
  std::vector<double> a;    // a_i at the corner; 1 when empty
};

/// Basis members of one symbol term after integration by parts, reduced
/// with the derivative relations. Unreducible pieces go to `errors`.
std::vector<MatchedTerm> match_terms(const SymbolTerm& term, const TraceFn& traces, int q, const MatchOptions& opt,
                                     std::vector<std::string>* errors);

/// Sums equal basis ids and sorts by strength, then id.
std::vector<MatchedTerm> combine_terms(std::vector<MatchedTerm> terms);

/// Fitted c(l, k) with its phase snapped to the exact one: c(l, 0) is
/// imaginary for |p| even and real for |p| odd.
cplx matched_normalization(int dims, int l, const std::vector<int>& k, const std::vector<double>& a);

struct CutoffFactorization {
  int index = 0;
  double discarded_ratio = 0;  // max |discarded| / max |v_j| in frequency space
  SmoothRemainderMeasure measure;
  std::vector<OrderGrowth> growth;  // one-sided, per corner axis and order, fine grid
  bool certified = false;
};

/// rho = prod chi_{eta_i} / chi^{j+1}, smooth on the support of the product cutoff.
SpectralField product_cutoff_part(const ExpansionContext& ctx, const SpectralField& v, int j);

/// Same domain and cutoff, every axis with twice the nodes.
ExpansionContext refined(const ExpansionContext& ctx);

/// Certifies that v_j (1 - rho) is smooth up to the corner: one-sided
/// differences through `order` near the corner on two grids.
CutoffFactorization factor_cutoff(const ExpansionContext& coarse, const ExpansionContext& fine,
                                  const DataFunction& f, int j, int order = defaults::cutoff_factor_order);

/// Terms of 1/Sigma = sum_{s<S} (-A)^s / Sigma'^{s+1} + (-A)^S / (Sigma'^S Sigma),
/// A = a_m eta_m^2, Sigma' the sum over the other axes.
struct GeometricSplit {
  int m_axis = 0;
  int N = 0;  // padded so that N + q is even
  int terms = 0;
  SmoothRemainderMeasure measure;
  std::vector<OrderGrowth> growth;
  bool certified = false;
};

/// |1/Sigma - split series| at eta.
double split_identity_defect(const std::vector<double>& a, const std::vector<double>& eta, int m, int S);

/// Builds the final split term of a remainder entry on both grids and
/// certifies C^N through one-sided differences.
GeometricSplit geometric_split(const ExpansionContext& coarse, const ExpansionContext& fine, const DataFunction& f,
                               const RemainderEntry& entry, int N);

struct AssembleOptions {
  ExpansionGridSpec grid;
  bool certify = true;         // cutoff factorization and split certification on grid and 2 x grid
  bool profiles = false;       // tangential coefficient profiles
  std::vector<double> profile_offsets{-0.1, -0.05, 0.0, 0.05, 0.1};
  int max_strength = -1;       // N + q when negative
  int numeric_nodes = 0;       // corner slice for the leading fit; 0: 512 for q = 2, 96 otherwise
  double cutoff_r0 = 0;        // frequency cutoff radii; 0 keeps the grid default
  double cutoff_r1 = 0;
};

struct ExpansionResult {
  std::vector<MatchedTerm> terms;
  RegularityReport remainder;
  std::vector<CutoffFactorization> cutoff_checks;
  std::vector<GeometricSplit> split_checks;
  std::vector<std::string> errors;
  std::vector<double> base_point;
  cplx numeric_leading = 0;    // coefficient of the leading term fitted from v_0 on the grid
  double imaginary_ratio = 0;  // max |Im sum c Phi| / max |Re sum c Phi| near the corner
  int N = 0;

  /// sum c Phi at a point of Omega, through the model coordinates.
  cplx evaluate(const ProductDomainSpec& domain, const std::vector<double>& x) const;
};

/// localize, reflect, v_0..v_N, factor_cutoff, ibp_expand, geometric_split,
/// match_terms. Stage failures are recorded in `errors` and the rest continues.
ExpansionResult assemble_expansion(const DataFunction& f, const ProductDomainSpec& domain, int N,
                                   const AssembleOptions& opt = {});

/// v_0 = chi h~ / (-Sigma) on a q-dimensional corner grid over the base
/// point, with a_i frozen there. Only the corner slice is needed for the
/// leading coefficient, so the resolution is independent of the main grid.
SpectralField corner_slice_v0(const ProductDomainSpec& domain, const DataFunction& f, int nodes, double half_length);

/// Least-squares symbol coefficient of eta^{-k} / Sigma^l in v at the base
/// tangential slot over the annulus [r_lo, r_hi], every |eta_i| >= r_lo / 2.
/// The discrete jump factor prod x_i cot x_i, x_i = pi eta_i / (2 Nyquist), is
/// divided out first. Nuisance columns eta^{-k'} / Sigma^l {1, eta_i^2} for k
/// and for every k' in `others`.
cplx fit_symbol_coefficient(const SpectralField& v, const std::vector<double>& a, const std::vector<int>& k, int l,
                            const std::vector<std::vector<int>>& others, double r_lo, double r_hi);

}  // namespace cornex
