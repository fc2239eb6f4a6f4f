#include <doctest.h>

#include <cmath>
#include <random>

#include "cknlab/errors.hpp"
#include "cknlab/extremal.hpp"
#include "cknlab/params.hpp"
#include "support.hpp"

using namespace cknlab;
using doctest::Approx;

TEST_CASE("validate_params accepts admissible sets and flags the Hardy endpoint") {
  const auto p = validate_params(3, 2, 0, 0, 2);
  CHECK(p.d() == 1.0);
  CHECK_FALSE(p.hardy_endpoint());
  const auto h = validate_params(4, 2, 0, 1, 1);
  CHECK(h.d() == 0.0);
  CHECK(h.hardy_endpoint());
  CHECK_THROWS_AS(require_positive_d(h, "test"), UnsupportedError);
}

TEST_CASE("validate_params names each violated constraint") {
  auto which = [](double n, double p, double a, double b, double c) {
    try {
      validate_params(n, p, a, b, c);
    } catch (const ParameterError& e) {
      return e.which();
    }
    FAIL("expected ParameterError");
    return Constraint::dimension;
  };
  CHECK(which(3, 2, 0.6, 0.6, 1) == Constraint::a_range);
  CHECK(which(3, 4, 0, 0, 1) == Constraint::p_range);
  CHECK(which(3, 1, 0, 0, 1) == Constraint::p_range);
  CHECK(which(3, 2, 0, -0.1, 1) == Constraint::b_range);
  CHECK(which(3, 2, 0, 1.1, 1) == Constraint::b_range);
  CHECK(which(3, 2, 0, 0, 0) == Constraint::c_positive);
  CHECK(which(2.5, 2, 0, 0, 1) == Constraint::dimension);
  try {
    validate_params(3, 2, 0.6, 0.6, 1);
  } catch (const ParameterError& e) {
    CHECK(std::string(e.what()).find("a-range") != std::string::npos);
    CHECK(std::string(e.what()).find("0.5") != std::string::npos);
  }
}

TEST_CASE("derive_exponents closed forms") {
  auto e = derive_exponents(validate_params(3, 2, 0, 0, 2));
  CHECK(e.d == 1.0);
  CHECK(e.q == Approx(6.0).epsilon(1e-15));
  CHECK(e.cstar == Approx(1.0));
  CHECK(*e.eta == Approx(2.0).epsilon(1e-15));
  CHECK(*e.c0 == Approx(std::pow(3.0, 0.25)).epsilon(1e-14));
  CHECK(*e.c0 == Approx(1.316074).epsilon(1e-6));

  e = derive_exponents(validate_params(5, 2, 0.5, 1, 1));
  CHECK(e.d == Approx(0.5));
  CHECK(e.q == Approx(2.5));
  CHECK(e.cstar == Approx(2.0));

  e = derive_exponents(validate_params(5, 2, 0, 0, 1));
  CHECK(e.q == Approx(10.0 / 3.0).epsilon(1e-15));
  CHECK(e.cstar == Approx(3.0));
  CHECK(e.gap_coeff == Approx(0.2));

  e = derive_exponents(validate_params(4, 2, 0, 1, 1));
  CHECK(e.q == Approx(2.0));
  CHECK_FALSE(e.eta.has_value());
  CHECK_FALSE(e.nehari_exp.has_value());
}

TEST_CASE("exponent identities and weight integrability over random parameters") {
  for (const auto& prm : testing::random_params(50)) {
    const auto e = derive_exponents(prm);
    const double n = prm.n(), p = prm.p();
    CHECK(std::abs((1.0 / p - 1.0 / e.q) - e.d / n) <= 1e-12 * (e.d / n));
    CHECK(std::abs(e.q / (e.q - p) - n / (e.d * p)) <= 1e-12 * n / (e.d * p));
    CHECK(*e.nehari_exp == Approx(e.q / (e.q - p)).epsilon(1e-12));
    CHECK(e.q > p);
    CHECK((prm.a() + 1.0) * p < n);
    CHECK(prm.b() * e.q < n);
  }
}

TEST_CASE("extremal profile values") {
  const auto prm = validate_params(3, 2, 0, 0, 2);
  CHECK(extremal_value(prm, 0.0) == Approx(std::pow(3.0, 0.25)).epsilon(1e-14));
  CHECK(extremal_value(prm, 1.0) == Approx(std::pow(3.0, 0.25) / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(extremal_value(prm, 1.0) == Approx(0.930605).epsilon(1e-6));
  const ExtremalProfile U(prm);
  CHECK(U.amplitude() == Approx(std::pow(3.0, 0.25)));
  CHECK(extremal_value(prm, 1e8) < 1e-7);

  std::mt19937 gen(7);
  std::uniform_real_distribution<double> R(0.0, 50.0);
  for (const auto& q : testing::random_params(10, 99)) {
    for (int i = 0; i < 100; ++i) {
      double r1 = R(gen), r2 = R(gen);
      if (r1 > r2) std::swap(r1, r2);
      if (r1 == r2) continue;
      CHECK(extremal_value(q, r1) > extremal_value(q, r2));
      CHECK(extremal_value(q, r2) > 0.0);
    }
  }
  CHECK_THROWS_AS(extremal_value(validate_params(4, 2, 0, 1, 1), 0.5), UnsupportedError);
}

TEST_CASE("bubble family and k(eps)") {
  const auto prm = validate_params(3, 2, 0, 0, 2);
  CHECK(bubble_value(prm, 1.0, 1.0) == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(k_eps(prm, 1.0) == Approx(std::pow(3.0, 0.25)).epsilon(1e-14));
  CHECK(k_eps(prm, 1.0) * bubble_value(prm, 1.0, 1.0) == Approx(extremal_value(prm, 1.0)).epsilon(1e-14));
  CHECK(k_eps(prm, 0.01) == Approx(0.131607).epsilon(1e-5));
  CHECK(bubble_value(prm, 0.01, 0.0) == Approx(10.0).epsilon(1e-14));
  // k(eps) U_eps(r) = U(r / eps^{1/eta})
  for (double eps : {1e-6, 1e-3, 0.5, 3.0}) {
    for (double r : {0.0, 1e-4, 0.01, 0.3, 2.0}) {
      CHECK(k_eps(prm, eps) * bubble_value(prm, eps, r) ==
            Approx(extremal_value(prm, r / std::sqrt(eps))).epsilon(1e-10));
    }
  }
  // Derivative against a central difference.
  const auto q = validate_params(5, 2.5, 0.2, 0.5, 1);
  for (double r : {0.05, 0.3, 1.7}) {
    const double h = 1e-6 * r;
    const double fd = (bubble_value(q, 0.01, r + h) - bubble_value(q, 0.01, r - h)) / (2 * h);
    CHECK(bubble_derivative(q, 0.01, r) == Approx(fd).epsilon(1e-6));
  }
}
