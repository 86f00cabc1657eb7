#include "cornex/poly.hpp"

#include <cmath>
#include <sstream>

#include "cornex/error.hpp"

namespace cornex {

Poly Poly::constant(int vars, cplx c) {
  Poly p(vars);
  p.add(Monomial(vars, 0), c);
  return p;
}

Poly Poly::variable(int vars, int i) {
  Monomial m(vars, 0);
  m[i] = 1;
  return monomial(vars, m, 1.0);
}

Poly Poly::monomial(int vars, const Monomial& m, cplx c) {
  Poly p(vars);
  p.add(m, c);
  return p;
}

bool Poly::is_zero(double tol) const {
  for (const auto& [m, c] : terms_)
    if (std::abs(c) > tol) return false;
  return true;
}

cplx Poly::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? cplx(0) : it->second;
}

void Poly::add(const Monomial& m, cplx c) {
  if (static_cast<int>(m.size()) != vars_) throw ShapeError("monomial arity mismatch");
  if (c == cplx(0)) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == cplx(0)) terms_.erase(it);
  }
}

Poly& Poly::operator+=(const Poly& o) {
  if (vars_ == 0 && terms_.empty()) vars_ = o.vars_;
  for (const auto& [m, c] : o.terms_) add(m, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (vars_ == 0 && terms_.empty()) vars_ = o.vars_;
  for (const auto& [m, c] : o.terms_) add(m, -c);
  return *this;
}

Poly& Poly::operator*=(cplx s) {
  if (s == cplx(0)) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, c] : terms_) c *= s;
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly r(std::max(a.vars_, b.vars_));
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) {
      Monomial m(ma);
      for (std::size_t i = 0; i < m.size(); ++i) m[i] += mb[i];
      r.add(m, ca * cb);
    }
  return r;
}

Poly Poly::derivative(int i) const {
  Poly r(vars_);
  for (const auto& [m, c] : terms_) {
    if (m[i] == 0) continue;
    Monomial mm(m);
    mm[i] -= 1;
    r.add(mm, c * static_cast<double>(m[i]));
  }
  return r;
}

Poly Poly::integral(int i) const {
  Poly r(vars_);
  for (const auto& [m, c] : terms_) {
    Monomial mm(m);
    mm[i] += 1;
    r.add(mm, c / static_cast<double>(mm[i]));
  }
  return r;
}

cplx Poly::operator()(const double* y) const {
  cplx s = 0;
  for (const auto& [m, c] : terms_) {
    double v = 1;
    for (int i = 0; i < vars_; ++i)
      for (int k = 0; k < m[i]; ++k) v *= y[i];
    s += c * v;
  }
  return s;
}

int Poly::degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_) {
    int s = 0;
    for (int e : m) s += e;
    d = std::max(d, s);
  }
  return d;
}

int Poly::degree_in(const std::vector<int>& vars) const {
  int d = -1;
  for (const auto& [m, c] : terms_) {
    int s = 0;
    for (int v : vars) s += m[v];
    d = std::max(d, s);
  }
  return d;
}

Poly Poly::pruned(double tol) const {
  Poly r(vars_);
  for (const auto& [m, c] : terms_)
    if (std::abs(c) > tol) r.add(m, c);
  return r;
}

std::string Poly::str(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.real() << (c.imag() < 0 ? "" : "+") << c.imag() << "i)";
    for (int i = 0; i < vars_; ++i) {
      if (!m[i]) continue;
      os << "*" << (i < static_cast<int>(names.size()) ? names[i] : "y" + std::to_string(i + 1));
      if (m[i] > 1) os << "^" << m[i];
    }
  }
  return os.str();
}

Poly pow(const Poly& p, int k) {
  Poly r = Poly::constant(p.vars(), 1.0);
  for (int i = 0; i < k; ++i) r = r * p;
  return r;
}

}  // namespace cornex
