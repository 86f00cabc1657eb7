#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace cornex {

using cplx = std::complex<double>;

enum class Parity { None, Odd, Even };
enum class Centering { Node, Cell };

std::string to_string(Parity p);

/// One periodic axis [-L, L) with nodes -L + (k + s) h, s = 0 (node) or 1/2 (cell).
struct Axis {
  int nodes = 0;
  double half_length = 1.0;
  Centering centering = Centering::Node;

  double spacing() const { return 2 * half_length / nodes; }
  double shift() const { return centering == Centering::Node ? 0.0 : 0.5; }
  double node(int k) const { return -half_length + (k + shift()) * spacing(); }
  /// Discrete dual frequency pi m / L in FFT order, Nyquist taken negative.
  double freq(int m) const;
  /// Index of -y_k.
  int mirror(int k) const;
  /// Index of y = 0, or -1 for cell-centered axes.
  int zero_index() const { return centering == Centering::Node ? nodes / 2 : -1; }
  double nyquist() const { return 3.14159265358979323846 * (nodes / 2) / half_length; }
};

/// Tensor grid; the first q axes are the corner (reflected) axes, the rest tangential.
class TensorGrid {
 public:
  TensorGrid() = default;
  TensorGrid(std::vector<Axis> axes, int q);
  /// n axes of equal shape.
  static TensorGrid uniform(int dims, int q, int nodes, double half_length, Centering c = Centering::Node);

  int dims() const { return static_cast<int>(axes_.size()); }
  int q() const { return q_; }
  const Axis& axis(int k) const { return axes_[k]; }
  const std::vector<Axis>& axes() const { return axes_; }
  std::size_t size() const { return size_; }
  std::size_t stride(int k) const { return strides_[k]; }
  void unflatten(std::size_t flat, int* idx) const;
  std::size_t flatten(const int* idx) const;
  double cell_volume() const;
  bool operator==(const TensorGrid& o) const;

 private:
  std::vector<Axis> axes_;
  int q_ = 0;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 0;
};

/// Shared storage of GridFunction and SpectralField.
struct FieldData {
  TensorGrid grid;
  std::vector<cplx> values;
  std::vector<Parity> parity;  // per corner axis

  FieldData() = default;
  explicit FieldData(const TensorGrid& g) : grid(g), values(g.size()), parity(g.q(), Parity::None) {}
  cplx& operator[](std::size_t i) { return values[i]; }
  const cplx& operator[](std::size_t i) const { return values[i]; }
  double max_abs() const;
};

/// Values in physical space on every axis.
class GridFunction : public FieldData {
 public:
  using FieldData::FieldData;
  /// Samples fn at every node.
  static GridFunction sample(const TensorGrid& g, const std::function<cplx(const double*)>& fn);
  /// Largest deviation from the tagged parity, relative to max |f|.
  double parity_defect(int axis) const;
};

/// Values spectral on the axes flagged in `spectral`, physical on the rest.
class SpectralField : public FieldData {
 public:
  SpectralField() = default;
  SpectralField(const TensorGrid& g, std::vector<bool> spectral_axes)
      : FieldData(g), spectral(std::move(spectral_axes)) {}
  std::vector<bool> spectral;

  /// Coordinate of node `idx` per axis: frequency on spectral axes, position otherwise.
  void coordinates(const int* idx, double* out) const;
  /// even-part norm / odd-part norm under eta_axis -> -eta_axis.
  double oddness_ratio(int axis) const;
  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator*=(cplx s);
};

struct ReflectResult {
  GridFunction f;
  /// max |f(y_axis = 0)| before an odd reflection cleared it.
  double boundary_jump = 0.0;
};

/// Extends data given on {y_axis >= 0} across y_axis = 0.
ReflectResult reflect(const GridFunction& f, int axis, Parity parity);
/// Restriction to y_axis >= 0 with the negative side zeroed.
GridFunction restrict_half(const GridFunction& f, int axis);

SpectralField partial_ft(const GridFunction& f, const std::vector<int>& axes);
SpectralField partial_ft(const SpectralField& f, const std::vector<int>& axes);
SpectralField partial_ift(const SpectralField& f, const std::vector<int>& axes);
/// Fully physical copy; requires all axes physical.
GridFunction to_grid_function(const SpectralField& f);

double smoothstep7(double t);

struct CutoffSpec {
  enum class Kind { FrequencyAnnular, PerAxisFrequency, SpatialBump };
  enum class Profile { Smoothstep7, Erfc };
  Kind kind = Kind::FrequencyAnnular;
  double r0 = 1.0;
  double r1 = 2.0;
  Profile profile = Profile::Smoothstep7;
  /// Axes the cutoff acts on (all corner axes when empty).
  std::vector<int> axes;

  /// Annular/bump radial profile at radius r.
  double radial(double r) const;
  /// Evaluates at coordinates (frequencies for frequency kinds, positions for the bump).
  double operator()(const double* coords, int q) const;
};

/// Default annular cutoff: r0 = 2 pi / L (twice the fundamental), r1 = 2 r0.
CutoffSpec default_frequency_cutoff(const TensorGrid& g);

using SymbolFn = std::function<cplx(const double* coords)>;

/// Pointwise multiplication in the mixed representation.
/// Throws MissingCutoffError when sigma is not finite at a grid point.
SpectralField apply_symbol(const SpectralField& F, const SymbolFn& sigma);

/// Fraction of max |f| found within `band` nodes of the periodic seam on any axis.
double seam_fraction(const FieldData& f, int band);

}  // namespace cornex
