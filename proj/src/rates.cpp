#include "cknlab/rates.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cknlab/errors.hpp"

namespace cknlab {

namespace {

struct LineFit {
  double slope, intercept, stderr_slope, rss, tss;
};

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, tss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    tss += (y[i] - my) * (y[i] - my);
  }
  LineFit f{};
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    f.rss += r * r;
  }
  f.tss = tss;
  f.stderr_slope = x.size() > 2 ? std::sqrt(f.rss / (n - 2.0) / sxx) : 0.0;
  return f;
}

double r_squared(const LineFit& f) {
  if (f.tss <= 0.0) return 1.0;
  return std::clamp(1.0 - f.rss / f.tss, 0.0, 1.0);
}

}  // namespace

RateFit fit_rate(std::span<const double> eps, std::span<const double> values) {
  if (eps.size() != values.size()) throw InputError("fit_rate: eps and values differ in length");
  if (eps.size() < 5) throw InputError("fit_rate: at least 5 eps values are required");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0)) throw InputError("fit_rate: eps values must be positive");
    if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
      std::ostringstream os;
      os << "fit_rate: non-positive measured value " << values[i] << " at eps=" << eps[i];
      throw InputError(os.str());
    }
  }
  const double ratio0 = std::log(eps[1] / eps[0]);
  if (ratio0 == 0.0) throw InputError("fit_rate: eps values must be distinct");
  for (std::size_t i = 1; i < eps.size(); ++i) {
    if (std::abs(std::log(eps[i] / eps[i - 1]) - ratio0) > 1e-6 * std::abs(ratio0)) {
      throw InputError("fit_rate: eps values must be geometrically spaced");
    }
  }

  std::vector<double> x(eps.size()), y(eps.size()), ylog(eps.size());
  bool log_model_defined = true;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    x[i] = std::log(eps[i]);
    y[i] = std::log(values[i]);
    if (eps[i] >= 1.0) log_model_defined = false;
    ylog[i] = log_model_defined ? y[i] - std::log(std::abs(x[i])) : 0.0;
  }
  const LineFit pure = least_squares(x, y);
  RateFit out{pure.slope, pure.intercept, pure.stderr_slope, r_squared(pure), false};
  if (!log_model_defined) return out;
  const LineFit logf = least_squares(x, ylog);
  // An exact power law leaves only roundoff in both models.
  const bool pure_imperfect = pure.rss > 1e-12 * std::max(pure.tss, 1e-300);
  if (pure_imperfect && logf.rss <= 0.5 * pure.rss) {
    out = RateFit{logf.slope, logf.intercept, logf.stderr_slope, r_squared(logf), true};
  }
  return out;
}

const char* to_string(RateQuantity q) {
  switch (q) {
    case RateQuantity::grad_correction: return "grad_corr";
    case RateQuantity::alpha1: return "alpha1";
    case RateQuantity::alpha2: return "alpha2";
    case RateQuantity::alpha_pm2: return "alphapm2";
    case RateQuantity::alpha_pm1: return "alphapm1";
    case RateQuantity::pert: return "pert";
  }
  return "unknown";
}

RateQuantity rate_quantity_from_string(const std::string& name) {
  for (auto q : {RateQuantity::grad_correction, RateQuantity::alpha1, RateQuantity::alpha2, RateQuantity::alpha_pm2,
                 RateQuantity::alpha_pm1, RateQuantity::pert}) {
    if (name == to_string(q)) return q;
  }
  throw InputError("unknown rate quantity: " + name);
}

RateFit fit_rate(const std::vector<BubbleRecord>& records, RateQuantity which) {
  std::vector<double> eps, vals;
  for (const auto& r : records) {
    eps.push_back(r.eps);
    switch (which) {
      case RateQuantity::grad_correction: vals.push_back(r.grad_correction); break;
      case RateQuantity::alpha1: vals.push_back(r.grad_alpha[0]); break;
      case RateQuantity::alpha2: vals.push_back(r.grad_alpha[1]); break;
      case RateQuantity::alpha_pm2: vals.push_back(r.grad_alpha[2]); break;
      case RateQuantity::alpha_pm1: vals.push_back(r.grad_alpha[3]); break;
      case RateQuantity::pert: vals.push_back(r.pert); break;
    }
  }
  return fit_rate(eps, vals);
}

std::vector<BubbleRecord> asymptotic_window(const CknParams& params, double radius,
                                            const std::vector<BubbleRecord>& records) {
  require_positive_d(params, "asymptotic_window");
  const double eta = *derive_exponents(params).eta;
  std::vector<BubbleRecord> out;
  for (const auto& r : records) {
    if (std::pow(r.eps, 1.0 / eta) <= radius / 40.0) out.push_back(r);
  }
  if (out.size() >= 5 || records.size() < 5) return out;
  auto sorted = records;
  std::sort(sorted.begin(), sorted.end(), [](const auto& x, const auto& y) { return x.eps > y.eps; });
  return {sorted.end() - 5, sorted.end()};
}

RateTable rate_table(const CknParams& params) {
  require_positive_d(params, "rate_table");
  const auto ex = derive_exponents(params);
  const double n = params.n(), p = params.p(), a = params.a(), b = params.b(), c = params.c();
  const double d = ex.d, q = ex.q, eta = *ex.eta;
  const double N = hardy_gap(params);
  const double m = (n - d * p) / (d * p);
  // ||psi U_eps||_{q,b} ~ eps^{-sigma}
  const double sigma = m - (n - b * q) / (q * eta);
  constexpr double kTie = 1e-12;

  RateTable t{};
  t.paper_item1 = {(n - d * p) / d, false};
  t.scaling_item1 = {(n - d * p) / (d * p), false};

  t.alphas = {1.0, 2.0, p - 2.0, p - 1.0};
  for (std::size_t i = 0; i < 4; ++i) {
    const double al = t.alphas[i];
    t.paper_item2[i] = {al * (n - d * p) / (d * p), false};
    // Core integral of |DU_eps|^al scales like eps^{core}; it dominates the
    // O(1) cutoff-region contribution only when core < 0.
    const double core = (-al * (m * eta + 1.0) + n - a * p) / eta;
    const bool tie = std::abs(core) < kTie;
    t.scaling_item2[i] = {al * sigma + std::min(core, 0.0), tie};
  }

  const double cstar = ex.cstar;
  const bool at_threshold = std::abs(c - cstar) <= kTie * std::max(1.0, cstar);
  if (at_threshold) {
    t.regime = "c=c*";
    t.paper_item3 = {(n - d * p) / d, true};
    t.scaling_item3 = {(n - d * p) / (d * p), true};
  } else if (c > cstar) {
    t.regime = "c>c*";
    t.paper_item3 = {(n - d * p) / d, false};
    t.scaling_item3 = {(n - d * p) / (d * p), false};
  } else {
    t.regime = "c<c*";
    t.paper_item3 = {(p - 1.0) * (n - d * p) * (n + c - (a + 1.0) * p) / (d * p * N), false};
    t.scaling_item3 = {c / eta, false};
  }
  return t;
}

}  // namespace cknlab
