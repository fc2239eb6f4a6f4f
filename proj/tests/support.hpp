#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "cknlab/params.hpp"

namespace testing {

/// Reproducible admissible parameter sets with d in [0.05, 1].
inline std::vector<cknlab::CknParams> random_params(int count, unsigned seed = 20240611u) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<cknlab::CknParams> out;
  while (static_cast<int>(out.size()) < count) {
    const int n = 2 + static_cast<int>(U(gen) * 6.0);  // 2..7
    const double p = 1.2 + U(gen) * (std::min(n - 0.3, 4.0) - 1.2);
    const double a_hi = (n - p) / p - 0.05;
    const double a_lo = std::min(-0.5, a_hi - 0.5);
    const double a = a_lo + U(gen) * (a_hi - a_lo);
    const double d = 0.05 + 0.95 * U(gen);
    const double b = a + 1.0 - d;
    const double c = 0.1 + 3.9 * U(gen);
    out.push_back(cknlab::validate_params(n, p, a, b, c));
  }
  return out;
}

/// Closed-form int_{r0}^{r1} r^k dr.
inline double power_moment(double r0, double r1, double k) {
  return (std::pow(r1, k + 1.0) - std::pow(r0, k + 1.0)) / (k + 1.0);
}

/// First positive root of tan x = x, i.e. j_{3/2,1}.
inline double bessel_j32_root() {
  double x = 4.49;
  for (int i = 0; i < 50; ++i) x -= (std::tan(x) - x) / (1.0 / (std::cos(x) * std::cos(x)) - 1.0);
  return x;
}

}  // namespace testing
