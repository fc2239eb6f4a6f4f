#pragma once

#include <vector>

namespace cknlab {

/// Gauss-Legendre rule on [0, 1].
struct GaussRule {
  std::vector<double> points;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule mapped to [0, 1]; nodes by Newton on P_n.
const GaussRule& gauss_legendre(int n);

}  // namespace cknlab
