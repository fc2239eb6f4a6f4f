#include "cknlab/bubble.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

#include "cknlab/errors.hpp"
#include "cknlab/extremal.hpp"
#include "cknlab/functionals.hpp"
#include "cknlab/quadrature.hpp"

namespace cknlab {

double cutoff(double r, double radius) {
  const double s = (r - 0.25 * radius) / (0.25 * radius);
  if (s <= 0.0) return 1.0;
  if (s >= 1.0) return 0.0;
  return 1.0 - 3.0 * s * s + 2.0 * s * s * s;
}

double cutoff_derivative(double r, double radius) {
  const double s = (r - 0.25 * radius) / (0.25 * radius);
  if (s <= 0.0 || s >= 1.0) return 0.0;
  return (-6.0 * s + 6.0 * s * s) / (0.25 * radius);
}

namespace {

void check_resolution(const RadialGrid& grid, double eps, double eta) {
  const double core = std::pow(eps, 1.0 / eta);
  if (grid[1] > core / 10.0) {
    throw InputError("bubble: grid does not resolve the core (r_1 > eps^{1/eta}/10)");
  }
}

}  // namespace

BubbleProfile::BubbleProfile(const CknParams& params, const GridPtr& grid, double eps)
    : params_(params), eps_(eps), radius_(grid->radius()) {
  require_positive_d(params, "bubble");
  if (!(eps > 0.0)) throw InputError("bubble: eps must be positive");
  if (grid->dimension() != params.n()) throw InputError("bubble: grid dimension does not match n");
  const auto ex = derive_exponents(params);
  eta_ = *ex.eta;
  m_ = (params.n() - ex.d * params.p()) / (ex.d * params.p());
  check_resolution(*grid, eps, eta_);
  const auto br = breaks();
  const double q = ex.q;
  const double qint =
      integrate_function(*grid, [&](double r) { return std::pow(std::abs(raw(r)), q); }, params.b() * q, br);
  norm_ = std::pow(qint, 1.0 / q);
}

double BubbleProfile::raw(double r) const {
  return cutoff(r, radius_) * std::pow(eps_ + std::pow(r, eta_), -m_);
}

double BubbleProfile::raw_derivative(double r) const {
  const double U = std::pow(eps_ + std::pow(r, eta_), -m_);
  double dU;
  if (r == 0.0) {
    dU = eta_ > 1.0 ? 0.0 : -std::numeric_limits<double>::infinity();
  } else {
    dU = -m_ * eta_ * std::pow(r, eta_ - 1.0) * U / (eps_ + std::pow(r, eta_));
  }
  return cutoff_derivative(r, radius_) * U + cutoff(r, radius_) * dU;
}

double BubbleProfile::value(double r) const { return raw(r) / norm_; }
double BubbleProfile::derivative(double r) const { return raw_derivative(r) / norm_; }

RadialField make_bubble(const CknParams& params, const GridPtr& grid, double eps) {
  require_positive_d(params, "make_bubble");
  if (!(eps > 0.0)) throw InputError("make_bubble: eps must be positive");
  const auto ex = derive_exponents(params);
  check_resolution(*grid, eps, *ex.eta);
  const double R = grid->radius();
  auto field = RadialField::sample(grid, [&](double r) { return cutoff(r, R) * bubble_value(params, eps, r); });
  const double scale = std::pow(critical_integral(params, field), -1.0 / ex.q);
  return field.scaled(scale);
}

BubbleRecord bubble_report(const CknParams& params, const GridPtr& grid, double eps) {
  return bubble_report(params, grid, eps, s_radial(params).value);
}

BubbleRecord bubble_report(const CknParams& params, const GridPtr& grid, double eps, double s_r) {
  const BubbleProfile v(params, grid, eps);
  const auto br = v.breaks();
  const double p = params.p(), a = params.a(), b = params.b(), c = params.c();
  const double q = derive_exponents(params).q;
  const auto& g = *grid;

  BubbleRecord rec{};
  rec.eps = eps;
  auto grad_power = [&](double alpha) {
    return integrate_function(g, [&](double r) { return std::pow(std::abs(v.derivative(r)), alpha); }, a * p, br);
  };
  rec.grad_p = grad_power(p);
  rec.grad_correction = rec.grad_p - s_r;
  const std::array<double, 4> alphas{1.0, 2.0, p - 2.0, p - 1.0};
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    rec.grad_alpha[i] = alphas[i] < 0.0 ? std::numeric_limits<double>::quiet_NaN() : grad_power(alphas[i]);
  }
  rec.pert = integrate_function(g, [&](double r) { return std::pow(std::abs(v.value(r)), p); },
                                (a + 1.0) * p - c, br);
  rec.qnorm = std::pow(
      integrate_function(g, [&](double r) { return std::pow(std::abs(v.value(r)), q); }, b * q, br), 1.0 / q);
  return rec;
}

std::vector<BubbleRecord> sweep(const CknParams& params, const GridPtr& grid, const std::vector<double>& eps_list) {
  const double s_r = s_radial(params).value;
  std::vector<std::future<BubbleRecord>> jobs;
  jobs.reserve(eps_list.size());
  for (double eps : eps_list) {
    jobs.push_back(std::async(std::launch::async, [&, eps] { return bubble_report(params, grid, eps, s_r); }));
  }
  std::vector<BubbleRecord> out;
  out.reserve(jobs.size());
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

std::vector<double> geometric_eps(double eps_min, double eps_max, int count) {
  if (!(eps_min > 0.0) || !(eps_max >= eps_min)) throw InputError("geometric_eps: need 0 < eps_min <= eps_max");
  if (count < 1) throw InputError("geometric_eps: count must be positive");
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = eps_max;
    return out;
  }
  const double step = std::log(eps_max / eps_min) / (count - 1);
  for (int i = 0; i < count; ++i) out[i] = eps_max * std::exp(-step * i);
  out.back() = eps_min;
  return out;
}

std::vector<AtomReport> atom_check(const CknParams& params, const GridPtr& grid,
                                   const std::vector<double>& eps_sequence, double delta) {
  const double R = grid->radius();
  if (!(delta > 0.0 && delta < R / 4.0)) throw InputError("atom_check: delta must lie in (0, R/4)");
  const double s_r = s_radial(params).value;
  const double p = params.p(), q = derive_exponents(params).q;
  std::vector<AtomReport> out;
  for (double eps : eps_sequence) {
    const BubbleProfile v(params, grid, eps);
    AtomReport rep{};
    rep.eps = eps;
    rep.delta = delta;
    const double nu = integrate_function(
        *grid, [&](double r) { return std::pow(std::abs(v.value(r)), q); }, params.b() * q, {}, delta);
    rep.nu_atom = std::clamp(nu, 0.0, 1.0);
    rep.mu_atom = integrate_function(
        *grid, [&](double r) { return std::pow(std::abs(v.derivative(r)), p); }, params.a() * p, {}, delta);
    rep.slack = rep.mu_atom - s_r * std::pow(rep.nu_atom, p / q);
    out.push_back(rep);
  }
  return out;
}

}  // namespace cknlab
