#include "cornex/jet.hpp"

#include <cmath>
#include <stdexcept>

namespace cornex {

Series::Series(int order, double c0) : c_(order + 1, 0.0) { c_[0] = c0; }

Series Series::variable(int order, double x0) {
  Series s(order, x0);
  if (order >= 1) s.c_[1] = 1.0;
  return s;
}

Series& Series::operator+=(const Series& o) {
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
  return *this;
}

Series& Series::operator-=(const Series& o) {
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
  return *this;
}

Series& Series::operator*=(double s) {
  for (auto& v : c_) v *= s;
  return *this;
}

Series operator*(const Series& a, const Series& b) {
  int K = a.order();
  Series r(K, 0.0);
  for (int i = 0; i <= K; ++i)
    for (int j = 0; i + j <= K; ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
  return r;
}

Series operator/(const Series& a, const Series& b) {
  int K = a.order();
  Series r(K, 0.0);
  for (int k = 0; k <= K; ++k) {
    double s = a.c_[k];
    for (int j = 1; j <= k; ++j) s -= b.c_[j] * r.c_[k - j];
    r.c_[k] = s / b.c_[0];
  }
  return r;
}

Series reciprocal(const Series& a) { return Series(a.order(), 1.0) / a; }

Series exp(const Series& a) {
  int K = a.order();
  Series e(K, std::exp(a[0]));
  for (int k = 1; k <= K; ++k) {
    double s = 0;
    for (int j = 1; j <= k; ++j) s += j * a[j] * e[k - j];
    e[k] = s / k;
  }
  return e;
}

Series log(const Series& a) {
  int K = a.order();
  Series l(K, std::log(a[0]));
  for (int k = 1; k <= K; ++k) {
    double s = a[k];
    for (int j = 1; j < k; ++j) s -= static_cast<double>(j) / k * l[j] * a[k - j];
    l[k] = s / a[0];
  }
  return l;
}

Series sqrt(const Series& a) {
  int K = a.order();
  Series r(K, std::sqrt(a[0]));
  for (int k = 1; k <= K; ++k) {
    double s = a[k];
    for (int j = 1; j < k; ++j) s -= r[j] * r[k - j];
    r[k] = s / (2 * r[0]);
  }
  return r;
}

namespace {

void sincos(const Series& a, Series& s, Series& c) {
  int K = a.order();
  s = Series(K, std::sin(a[0]));
  c = Series(K, std::cos(a[0]));
  for (int k = 1; k <= K; ++k) {
    double ss = 0, cc = 0;
    for (int j = 1; j <= k; ++j) {
      ss += j * a[j] * c[k - j];
      cc -= j * a[j] * s[k - j];
    }
    s[k] = ss / k;
    c[k] = cc / k;
  }
}

}  // namespace

Series sin(const Series& a) {
  Series s, c;
  sincos(a, s, c);
  return s;
}

Series cos(const Series& a) {
  Series s, c;
  sincos(a, s, c);
  return c;
}

Jet::Jet(std::vector<int> orders, double c0) : orders_(std::move(orders)) {
  strides_.assign(orders_.size(), 1);
  std::size_t n = 1;
  for (int i = static_cast<int>(orders_.size()) - 1; i >= 0; --i) {
    strides_[i] = n;
    n *= static_cast<std::size_t>(orders_[i] + 1);
  }
  c_.assign(n, 0.0);
  c_[0] = c0;
}

Jet Jet::variable(const std::vector<int>& orders, int axis, double x0) {
  Jet j(orders, x0);
  if (orders[axis] >= 1) j.c_[j.strides_[axis]] = 1.0;
  return j;
}

std::size_t Jet::flat_index(const std::vector<int>& alpha) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < orders_.size(); ++i) idx += alpha[i] * strides_[i];
  return idx;
}

double Jet::coefficient(const std::vector<int>& alpha) const {
  for (std::size_t i = 0; i < orders_.size(); ++i)
    if (alpha[i] < 0 || alpha[i] > orders_[i]) return 0.0;
  return c_[flat_index(alpha)];
}

double Jet::derivative(const std::vector<int>& alpha) const {
  double f = 1;
  for (int a : alpha)
    for (int k = 2; k <= a; ++k) f *= k;
  return coefficient(alpha) * f;
}

int Jet::total_order() const {
  int t = 0;
  for (int o : orders_) t += o;
  return t;
}

Jet& Jet::operator+=(const Jet& o) {
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
  return *this;
}

Jet& Jet::operator+=(double s) {
  c_[0] += s;
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (auto& v : c_) v *= s;
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  const int d = a.dims();
  Jet r(a.orders_, 0.0);
  std::vector<int> ia(d, 0);
  for (std::size_t fa = 0; fa < a.c_.size(); ++fa) {
    if (fa > 0) {
      for (int k = d - 1; k >= 0; --k) {
        if (++ia[k] <= a.orders_[k]) break;
        ia[k] = 0;
      }
    }
    double ca = a.c_[fa];
    if (ca == 0.0) continue;
    // Iterate over b indices with ia + ib within orders.
    std::vector<int> ib(d, 0);
    std::size_t fb = 0;
    while (true) {
      std::size_t fr = 0;
      for (int k = 0; k < d; ++k) fr += (ia[k] + ib[k]) * r.strides_[k];
      r.c_[fr] += ca * b.c_[fb];
      int k = d - 1;
      for (; k >= 0; --k) {
        if (ia[k] + ib[k] + 1 <= a.orders_[k]) {
          ++ib[k];
          break;
        }
        ib[k] = 0;
      }
      if (k < 0) break;
      fb = 0;
      for (int m = 0; m < d; ++m) fb += ib[m] * b.strides_[m];
    }
  }
  return r;
}

Jet Jet::compose(const Series& f) const {
  int K = std::min(f.order(), total_order());
  Jet u = *this;
  u.c_[0] = 0.0;
  Jet r(orders_, f[K]);
  for (int k = K - 1; k >= 0; --k) {
    r = r * u;
    r.c_[0] += f[k];
  }
  return r;
}

Jet operator/(const Jet& a, const Jet& b) {
  int K = 0;
  for (int o : b.orders_) K += o;
  return a * b.compose(reciprocal(Series::variable(K, b.value())));
}

namespace {
int total(const Jet& a) {
  int K = 0;
  for (int o : a.orders()) K += o;
  return K;
}
}  // namespace

Jet exp(const Jet& a) { return a.compose(exp(Series::variable(total(a), a.value()))); }
Jet log(const Jet& a) { return a.compose(log(Series::variable(total(a), a.value()))); }
Jet sqrt(const Jet& a) { return a.compose(sqrt(Series::variable(total(a), a.value()))); }
Jet sin(const Jet& a) { return a.compose(sin(Series::variable(total(a), a.value()))); }
Jet cos(const Jet& a) { return a.compose(cos(Series::variable(total(a), a.value()))); }

}  // namespace cornex
