#include "cornex/data.hpp"

#include <cmath>

#include "cornex/error.hpp"

namespace cornex {

namespace {

template <class T>
T constant_like(const T& x, double c) {
  if constexpr (std::is_same_v<T, double>) {
    (void)x;
    return c;
  } else {
    return T(x.orders(), c);
  }
}

using std::cos;
using std::exp;

template <class Fn>
DataFunction wrap(const std::string& preset, int n, Fn fn) {
  DataFunction f;
  f.preset = preset;
  f.n = n;
  f.value = [fn](const double* x) { return fn(x); };
  f.jet = [fn](const Jet* x) { return fn(x); };
  return f;
}

double param(const std::string& preset, double fallback) {
  auto pos = preset.find(':');
  if (pos == std::string::npos) return fallback;
  try {
    return std::stod(preset.substr(pos + 1));
  } catch (const std::exception&) {
    throw Error("data preset '" + preset + "': bad parameter");
  }
}

}  // namespace

DataFunction make_data(const std::string& preset, const ProductDomainSpec& domain) {
  const int n = domain.n();
  const int q = domain.q();
  const std::vector<double> x0 = domain.base_point;
  std::string kind = preset.substr(0, preset.find(':'));
  if (kind == "zero") {
    return wrap(preset, n, [](const auto* x) { return constant_like(x[0], 0.0); });
  }
  if (kind == "one") {
    return wrap(preset, n, [](const auto* x) { return constant_like(x[0], 1.0); });
  }
  if (kind == "corner_bump") {
    double s = param(preset, 0.25);
    return wrap(preset, n, [x0, n, s](const auto* x) {
      auto r2 = constant_like(x[0], 0.0);
      for (int k = 0; k < n; ++k) {
        auto d = x[k] - x0[k];
        r2 = r2 + d * d;
      }
      return exp(r2 * (-1.0 / (s * s)));
    });
  }
  if (kind == "manufactured") {
    return wrap(preset, n, [x0, n](const auto* x) {
      auto arg = (x[0] - x0[0]) * 0.3 - (x[1] - x0[1]) * 0.2;
      for (int k = 2; k < n; ++k) arg = arg + (x[k] - x0[k]) * 0.1;
      return exp(arg) * cos((x[0] - x0[0]) * 0.5 + (x[1] - x0[1]) * 0.4 + 0.3);
    });
  }
  if (kind == "vanishing") {
    int M = static_cast<int>(param(preset, 3));
    return wrap(preset, n, [x0, q, M](const auto* x) {
      auto s = constant_like(x[0], 0.0);
      for (int i = 0; i < q; ++i) {
        auto d = x[i] - x0[i];
        auto p = constant_like(x[0], 1.0);
        for (int k = 0; k <= M; ++k) p = p * d;
        s = s + p;
      }
      return s;
    });
  }
  throw Error("unknown data preset '" + preset + "'");
}

}  // namespace cornex
