#include "cornex/grid.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>

#include "cornex/error.hpp"
#include "cornex/parallel.hpp"
#include "fft.hpp"

namespace cornex {

std::string to_string(Parity p) {
  switch (p) {
    case Parity::Odd:
      return "odd";
    case Parity::Even:
      return "even";
    default:
      return "none";
  }
}

double Axis::freq(int m) const {
  int mm = m < nodes / 2 ? m : m - nodes;
  return std::numbers::pi * mm / half_length;
}

int Axis::mirror(int k) const {
  if (centering == Centering::Node) return (nodes - k) % nodes;
  return nodes - 1 - k;
}

TensorGrid::TensorGrid(std::vector<Axis> axes, int q) : axes_(std::move(axes)), q_(q) {
  if (q_ < 0 || q_ > dims()) throw ShapeError("corner axis count exceeds grid dimension");
  strides_.assign(axes_.size(), 1);
  size_ = 1;
  for (int k = dims() - 1; k >= 0; --k) {
    if (axes_[k].nodes < 2 || axes_[k].nodes % 2) throw ShapeError("axis node counts must be even");
    strides_[k] = size_;
    size_ *= static_cast<std::size_t>(axes_[k].nodes);
  }
}

TensorGrid TensorGrid::uniform(int dims, int q, int nodes, double half_length, Centering c) {
  std::vector<Axis> axes(dims, Axis{nodes, half_length, c});
  return TensorGrid(axes, q);
}

void TensorGrid::unflatten(std::size_t flat, int* idx) const {
  for (int k = 0; k < dims(); ++k) {
    idx[k] = static_cast<int>(flat / strides_[k]);
    flat %= strides_[k];
  }
}

std::size_t TensorGrid::flatten(const int* idx) const {
  std::size_t f = 0;
  for (int k = 0; k < dims(); ++k) f += idx[k] * strides_[k];
  return f;
}

double TensorGrid::cell_volume() const {
  double v = 1;
  for (const auto& a : axes_) v *= a.spacing();
  return v;
}

bool TensorGrid::operator==(const TensorGrid& o) const {
  if (q_ != o.q_ || dims() != o.dims()) return false;
  for (int k = 0; k < dims(); ++k) {
    const auto &a = axes_[k], &b = o.axes_[k];
    if (a.nodes != b.nodes || a.half_length != b.half_length || a.centering != b.centering) return false;
  }
  return true;
}

double FieldData::max_abs() const {
  double m = 0;
  for (const auto& v : values) m = std::max(m, std::abs(v));
  return m;
}

GridFunction GridFunction::sample(const TensorGrid& g, const std::function<cplx(const double*)>& fn) {
  GridFunction f(g);
  parallel_for(g.size(), [&](std::size_t b, std::size_t e) {
    std::vector<int> idx(g.dims());
    std::vector<double> y(g.dims());
    for (std::size_t i = b; i < e; ++i) {
      g.unflatten(i, idx.data());
      for (int k = 0; k < g.dims(); ++k) y[k] = g.axis(k).node(idx[k]);
      f.values[i] = fn(y.data());
    }
  });
  return f;
}

double GridFunction::parity_defect(int axis) const {
  Parity p = parity.at(axis);
  if (p == Parity::None) return 0.0;
  double m = max_abs();
  if (m == 0) return 0.0;
  double worst = 0;
  std::vector<int> idx(grid.dims());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid.unflatten(i, idx.data());
    int k = idx[axis];
    idx[axis] = grid.axis(axis).mirror(k);
    cplx other = values[grid.flatten(idx.data())];
    cplx d = p == Parity::Odd ? values[i] + other : values[i] - other;
    worst = std::max(worst, std::abs(d));
    if (p == Parity::Odd && k == grid.axis(axis).zero_index()) worst = std::max(worst, std::abs(values[i]));
  }
  return worst / m;
}

void SpectralField::coordinates(const int* idx, double* out) const {
  for (int k = 0; k < grid.dims(); ++k) out[k] = spectral[k] ? grid.axis(k).freq(idx[k]) : grid.axis(k).node(idx[k]);
}

double SpectralField::oddness_ratio(int axis) const {
  if (!spectral.at(axis)) throw ShapeError("oddness ratio needs a spectral axis");
  double e2 = 0, o2 = 0;
  std::vector<int> idx(grid.dims());
  const int N = grid.axis(axis).nodes;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid.unflatten(i, idx.data());
    idx[axis] = (N - idx[axis]) % N;
    cplx other = values[grid.flatten(idx.data())];
    e2 += std::norm(0.5 * (values[i] + other));
    o2 += std::norm(0.5 * (values[i] - other));
  }
  if (o2 == 0) return e2 == 0 ? 0.0 : INFINITY;
  return std::sqrt(e2 / o2);
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  if (!(grid == o.grid) || spectral != o.spectral) throw ShapeError("adding fields on different grids");
  for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
  return *this;
}

SpectralField& SpectralField::operator*=(cplx s) {
  for (auto& v : values) v *= s;
  return *this;
}

ReflectResult reflect(const GridFunction& f, int axis, Parity parity) {
  if (axis < 0 || axis >= f.grid.q()) throw ShapeError("reflection axis must be a corner axis");
  ReflectResult r{f, 0.0};
  GridFunction& g = r.f;
  const Axis& ax = f.grid.axis(axis);
  const int N = ax.nodes;
  std::vector<int> idx(f.grid.dims());
  for (std::size_t i = 0; i < f.grid.size(); ++i) {
    f.grid.unflatten(i, idx.data());
    int k = idx[axis];
    if (ax.centering == Centering::Node) {
      if (k == N / 2) {
        if (parity == Parity::Odd) {
          r.boundary_jump = std::max(r.boundary_jump, std::abs(f.values[i]));
          g.values[i] = 0;
        }
        continue;
      }
      if (k == 0) {
        if (parity == Parity::Odd) g.values[i] = 0;
        continue;
      }
      if (k > N / 2) continue;
    } else if (k >= N / 2) {
      continue;
    }
    idx[axis] = ax.mirror(k);
    cplx src = f.values[f.grid.flatten(idx.data())];
    g.values[i] = parity == Parity::Odd ? -src : src;
  }
  g.parity[axis] = parity;
  return r;
}

GridFunction restrict_half(const GridFunction& f, int axis) {
  GridFunction g = f;
  const Axis& ax = f.grid.axis(axis);
  std::vector<int> idx(f.grid.dims());
  for (std::size_t i = 0; i < f.grid.size(); ++i) {
    f.grid.unflatten(i, idx.data());
    if (ax.node(idx[axis]) < 0 || idx[axis] == 0) g.values[i] = 0;
  }
  g.parity[axis] = Parity::None;
  return g;
}

namespace {

/// Multiplies by exp(sign * i eta_m y_0) * scale along each listed axis.
void phase_axes(std::vector<cplx>& v, const TensorGrid& g, const std::vector<int>& axes, int sign, bool forward) {
  for (int a : axes) {
    const Axis& ax = g.axis(a);
    const double y0 = ax.node(0);
    const double scale = forward ? ax.spacing() : 1.0 / (2 * ax.half_length);
    std::vector<cplx> ph(ax.nodes);
    for (int m = 0; m < ax.nodes; ++m) ph[m] = std::polar(scale, sign * ax.freq(m) * y0);
    const std::size_t st = g.stride(a);
    parallel_for(g.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) v[i] *= ph[(i / st) % ax.nodes];
    });
  }
}

void check_axes(const TensorGrid& g, const std::vector<int>& axes) {
  for (int a : axes)
    if (a < 0 || a >= g.dims()) throw ShapeError("transform axis out of range");
}

}  // namespace

SpectralField partial_ft(const SpectralField& f, const std::vector<int>& axes) {
  check_axes(f.grid, axes);
  SpectralField r = f;
  for (int a : axes)
    if (r.spectral[a]) throw ShapeError("axis already spectral");
  detail::fft_axes(r.values.data(), r.grid, axes, +1);
  phase_axes(r.values, r.grid, axes, +1, true);
  for (int a : axes) r.spectral[a] = true;
  return r;
}

SpectralField partial_ft(const GridFunction& f, const std::vector<int>& axes) {
  SpectralField s(f.grid, std::vector<bool>(f.grid.dims(), false));
  s.values = f.values;
  s.parity = f.parity;
  return partial_ft(s, axes);
}

SpectralField partial_ift(const SpectralField& f, const std::vector<int>& axes) {
  check_axes(f.grid, axes);
  SpectralField r = f;
  for (int a : axes)
    if (!r.spectral[a]) throw ShapeError("axis is not spectral");
  phase_axes(r.values, r.grid, axes, -1, false);
  detail::fft_axes(r.values.data(), r.grid, axes, -1);
  for (int a : axes) r.spectral[a] = false;
  return r;
}

GridFunction to_grid_function(const SpectralField& f) {
  for (bool s : f.spectral)
    if (s) throw ShapeError("field still has spectral axes");
  GridFunction g(f.grid);
  g.values = f.values;
  g.parity = f.parity;
  return g;
}

double smoothstep7(double t) {
  if (t <= 0) return 0;
  if (t >= 1) return 1;
  return t * t * t * t * (35 - 84 * t + 70 * t * t - 20 * t * t * t);
}

double CutoffSpec::radial(double r) const {
  if (profile == Profile::Erfc) {
    // r0 = center, r1 = width; rising with r for frequency kinds.
    double v = 0.5 * std::erfc((r - r0) / r1);
    if (r <= r0 - 6 * r1) v = 1;
    if (r >= r0 + 6 * r1) v = 0;
    return kind == Kind::SpatialBump ? v : 1 - v;
  }
  double t = (r - r0) / (r1 - r0);
  double s = smoothstep7(t);
  return kind == Kind::SpatialBump ? 1 - s : s;
}

double CutoffSpec::operator()(const double* c, int q) const {
  std::vector<int> ax = axes;
  if (ax.empty())
    for (int k = 0; k < q; ++k) ax.push_back(k);
  if (kind == Kind::PerAxisFrequency) {
    double p = 1;
    for (int k : ax) p *= radial(std::abs(c[k]));
    return p;
  }
  double r2 = 0;
  for (int k : ax) r2 += c[k] * c[k];
  return radial(std::sqrt(r2));
}

CutoffSpec default_frequency_cutoff(const TensorGrid& g) {
  double L = g.axis(0).half_length;
  CutoffSpec c;
  c.kind = CutoffSpec::Kind::FrequencyAnnular;
  c.r0 = 2 * std::numbers::pi / L;
  c.r1 = 2 * c.r0;
  return c;
}

SpectralField apply_symbol(const SpectralField& F, const SymbolFn& sigma) {
  SpectralField r = F;
  const TensorGrid& g = F.grid;
  std::atomic<bool> bad{false};
  parallel_for(g.size(), [&](std::size_t b, std::size_t e) {
    std::vector<int> idx(g.dims());
    std::vector<double> c(g.dims());
    for (std::size_t i = b; i < e; ++i) {
      g.unflatten(i, idx.data());
      F.coordinates(idx.data(), c.data());
      cplx s = sigma(c.data());
      if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) {
        bad = true;
        continue;
      }
      r.values[i] = s * F.values[i];
    }
  });
  if (bad) throw MissingCutoffError("symbol is not finite on the grid; a cutoff must mask its singular locus");
  return r;
}

double seam_fraction(const FieldData& f, int band) {
  double m = f.max_abs();
  if (m == 0) return 0;
  double s = 0;
  std::vector<int> idx(f.grid.dims());
  for (std::size_t i = 0; i < f.grid.size(); ++i) {
    f.grid.unflatten(i, idx.data());
    bool near = false;
    for (int k = 0; k < f.grid.dims(); ++k) {
      int n = f.grid.axis(k).nodes;
      if (idx[k] < band || idx[k] >= n - band) near = true;
    }
    if (near) s = std::max(s, std::abs(f.values[i]));
  }
  return s / m;
}

}  // namespace cornex
