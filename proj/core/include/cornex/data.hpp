#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cornex/geometry.hpp"
#include "cornex/jet.hpp"

namespace cornex {

/// Right-hand side f of the Dirichlet problem, given in Omega coordinates.
/// Presets: zero, one, corner_bump:sigma, manufactured, vanishing:M.
struct DataFunction {
  std::string preset;
  int n = 0;
  std::function<double(const double*)> value;
  std::function<Jet(const Jet*)> jet;

  double operator()(const double* x) const { return value(x); }
  Jet operator()(const Jet* x) const { return jet(x); }
  bool is_zero() const { return preset == "zero"; }
};

DataFunction make_data(const std::string& preset, const ProductDomainSpec& domain);

}  // namespace cornex
