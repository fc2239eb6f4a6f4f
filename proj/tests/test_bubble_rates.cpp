#include <doctest.h>

#include <cmath>
#include <vector>

#include "cknlab/bubble.hpp"
#include "cknlab/errors.hpp"
#include "cknlab/extremal.hpp"
#include "cknlab/functionals.hpp"
#include "cknlab/rates.hpp"
#include "support.hpp"

using namespace cknlab;
using doctest::Approx;

namespace {

std::vector<double> synthetic(const std::vector<double>& eps, double (*f)(double)) {
  std::vector<double> v;
  for (double e : eps) v.push_back(f(e));
  return v;
}

}  // namespace

TEST_CASE("fit_rate on synthetic data") {
  const auto eps = geometric_eps(1e-6, 1e-2, 13);
  REQUIRE(eps.size() == 13);
  CHECK(eps.front() == Approx(1e-2));
  CHECK(eps.back() == 1e-6);

  const auto pure = fit_rate(eps, synthetic(eps, [](double e) { return 3.0 * e * e; }));
  CHECK(pure.slope == Approx(2.0).epsilon(1e-6));
  CHECK_FALSE(pure.log_factor);
  CHECK(pure.r_squared == Approx(1.0));

  const auto dom = fit_rate(eps, synthetic(eps, [](double e) { return std::sqrt(e) * (1.0 + e); }));
  CHECK(std::abs(dom.slope - 0.5) <= 0.02);
  CHECK_FALSE(dom.log_factor);

  const auto lg = fit_rate(eps, synthetic(eps, [](double e) { return e * std::abs(std::log(e)); }));
  CHECK(lg.log_factor);
  CHECK(lg.slope == Approx(1.0).epsilon(1e-6));
  CHECK(lg.r_squared >= 0.0);
  CHECK(lg.r_squared <= 1.0);

  std::vector<double> bad = synthetic(eps, [](double e) { return e; });
  bad[4] = -1.0;
  try {
    fit_rate(eps, bad);
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("eps=") != std::string::npos);
  }
  const std::vector<double> few(eps.begin(), eps.begin() + 4);
  CHECK_THROWS_AS(fit_rate(few, synthetic(few, [](double e) { return e; })), InputError);
  auto uneven = eps;
  uneven[3] *= 1.5;
  CHECK_THROWS_AS(fit_rate(uneven, synthetic(uneven, [](double e) { return e; })), InputError);
}

TEST_CASE("rate_table columns") {
  const auto t3 = rate_table(validate_params(3, 2, 0, 0, 2));
  CHECK(t3.paper_item1.exponent == Approx(1.0));
  CHECK(t3.scaling_item1.exponent == Approx(0.5));
  const auto t5 = rate_table(validate_params(5, 2, 0, 0, 2));
  CHECK(t5.scaling_item1.exponent == Approx(1.5));
  CHECK(t5.paper_item1.exponent == Approx(3.0));
  CHECK(t5.regime == "c<c*");
  for (std::size_t i = 0; i < 4; ++i) CHECK(t5.paper_item2[i].exponent == Approx(t5.alphas[i] * 1.5));
  const auto t1 = rate_table(validate_params(5, 2, 0, 0, 1));
  CHECK(t1.scaling_item3.exponent == Approx(0.5));
  CHECK_FALSE(t1.scaling_item3.log_factor);
  const auto ts = rate_table(validate_params(5, 2, 0, 0, 3));
  CHECK(ts.regime == "c=c*");
  CHECK(ts.scaling_item3.log_factor);
  CHECK(ts.paper_item3.log_factor);
  CHECK(rate_table(validate_params(5, 2, 0, 0, 4)).regime == "c>c*");
  CHECK_THROWS_AS(rate_table(validate_params(4, 2, 0, 1, 1)), UnsupportedError);
  CHECK(to_string(RateQuantity::pert) == std::string("pert"));
  CHECK(rate_quantity_from_string("alpha1") == RateQuantity::alpha1);
  CHECK_THROWS_AS(rate_quantity_from_string("x"), InputError);
}

TEST_CASE("bubble normalization, support and resolution") {
  for (const auto& prm : testing::random_params(6, 77)) {
    const auto g = RadialGrid::make_default(prm.n());
    const double eps = std::pow(1e-3, *derive_exponents(prm).eta);  // core radius 1e-3
    const auto v = make_bubble(prm, g, eps);
    CHECK(std::pow(critical_integral(prm, v), 1.0 / derive_exponents(prm).q) == Approx(1.0).epsilon(1e-10));
    const auto rec = bubble_report(prm, g, eps);
    CHECK(rec.qnorm == Approx(1.0).epsilon(1e-10));
    for (std::size_t i = 0; i < g->size(); ++i) {
      if ((*g)[i] >= 0.5) CHECK(v[i] == 0.0);
    }
  }
  const auto prm = validate_params(3, 2, 0, 0, 2);
  const auto coarse = RadialGrid::build(3, 1.0, 16, 2.0);
  CHECK_THROWS_AS(make_bubble(prm, coarse, 1e-10), InputError);
  CHECK_THROWS_AS(make_bubble(validate_params(4, 2, 0, 1, 1), RadialGrid::make_default(4), 1e-3), UnsupportedError);
  CHECK(cutoff(0.2, 1.0) == 1.0);
  CHECK(cutoff(0.6, 1.0) == 0.0);
  CHECK(cutoff(0.375, 1.0) == Approx(0.5));
}

TEST_CASE("bubble records along a sweep") {
  const auto prm = validate_params(3, 2, 0, 0, 2);
  const auto g = RadialGrid::make_default(3);
  const double S = s_radial(prm).value;
  // The cutoff costs ~8.1% at eps = 1e-4 (independent high-precision value
  // 0.0814025) and falls like eps^{1/2}.
  CHECK(rayleigh_ckn(prm, make_bubble(prm, g, 1e-4)) / S - 1.0 == Approx(0.0814025).epsilon(1e-3));
  CHECK(std::abs(rayleigh_ckn(prm, make_bubble(prm, g, 1e-6)) / S - 1.0) < 0.02);
  const auto recs = sweep(prm, g, geometric_eps(1e-6, 1e-2, 9));
  for (std::size_t i = 0; i < recs.size(); ++i) {
    CHECK(recs[i].grad_correction > 0.0);
    CHECK(recs[i].grad_p >= S);
    CHECK(recs[i].qnorm == Approx(1.0).epsilon(1e-10));
    CHECK(recs[i].grad_alpha[0] < 10.0);
    if (i > 0) CHECK(recs[i].pert < recs[i - 1].pert);
  }
  const auto p15 = validate_params(3, 1.5, 0, 0, 1);
  const auto r15 = bubble_report(p15, g, 1e-3);
  CHECK(std::isnan(r15.grad_alpha[2]));
  CHECK(std::isfinite(r15.grad_alpha[3]));
}

TEST_CASE("asymptotic window") {
  const auto prm = validate_params(5, 2, 0, 0, 2);
  std::vector<BubbleRecord> recs;
  for (double e : geometric_eps(1e-6, 1e-2, 13)) recs.push_back(BubbleRecord{e, 1, 1, {1, 1, 1, 1}, 1, 1});
  const auto w = asymptotic_window(prm, 1.0, recs);
  for (const auto& r : w) CHECK(std::sqrt(r.eps) <= 1.0 / 40.0);
  CHECK(w.size() == 9);
  const auto w2 = asymptotic_window(prm, 1e-3, recs);
  REQUIRE(w2.size() == 5);
  CHECK(w2.back().eps == 1e-6);
}

TEST_CASE("atom diagnostic") {
  const auto prm = validate_params(5, 2, 0, 0, 2);
  const auto g = RadialGrid::make_default(5);
  const auto eps = geometric_eps(1e-6, 1e-2, 7);
  const auto atoms = atom_check(prm, g, eps, 0.2);
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    CHECK(atoms[i].nu_atom >= 0.0);
    CHECK(atoms[i].nu_atom <= 1.0);
    if (i > 0) CHECK(atoms[i].nu_atom >= atoms[i - 1].nu_atom);
  }
  const double S = s_radial(prm).value;
  CHECK(atoms.back().nu_atom == Approx(1.0).epsilon(0.02));
  CHECK(atoms.back().mu_atom == Approx(S).epsilon(0.02));
  CHECK_THROWS_AS(atom_check(prm, g, eps, 0.3), InputError);
}
