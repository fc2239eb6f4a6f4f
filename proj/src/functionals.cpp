#include "cknlab/functionals.hpp"

#include <algorithm>
#include <cmath>

#include "cknlab/errors.hpp"
#include "cknlab/quadrature.hpp"

namespace cknlab {

namespace {

void check_grid(const CknParams& params, const RadialGrid& grid) {
  if (grid.dimension() != params.n()) throw InputError("grid dimension does not match n");
}

double signed_pow(double x, double e) { return x < 0.0 ? -std::pow(-x, e) : std::pow(x, e); }

}  // namespace

double energy_phi(const CknParams& params, const RadialField& field) {
  const auto& g = field.grid();
  check_grid(params, g);
  const auto m = cell_moments(g, g.dimension() - 1.0 - params.a() * params.p());
  double sum = 0.0;
  for (std::size_t i = 0; i < g.cells(); ++i) sum += m.w0[i] * std::pow(std::abs(field.slope(i)), params.p());
  return g.sphere_area() * sum;
}

double energy_j(const CknParams& params, const RadialField& field) {
  check_grid(params, field.grid());
  return weighted_integral(field, (params.a() + 1.0) * params.p() - params.c(), params.p());
}

double critical_integral(const CknParams& params, const RadialField& field) {
  check_grid(params, field.grid());
  const double q = derive_exponents(params).q;
  return weighted_integral(field, params.b() * q, q);
}

double energy_total(const CknParams& params, const RadialField& field, double lambda) {
  const double p = params.p(), q = derive_exponents(params).q;
  return energy_phi(params, field) / p - critical_integral(params, field) / q -
         lambda / p * energy_j(params, field);
}

double rayleigh_ckn(const CknParams& params, const RadialField& field) {
  const double q = derive_exponents(params).q;
  const double den = critical_integral(params, field);
  if (!(den > 0.0)) throw InputError("rayleigh_ckn: field is identically zero");
  return energy_phi(params, field) / std::pow(den, params.p() / q);
}

DiscreteFunctionals::DiscreteFunctionals(const CknParams& params, GridPtr grid)
    : params_(params), grid_(std::move(grid)), q_(derive_exponents(params).q) {
  check_grid(params_, *grid_);
  const auto& g = *grid_;
  const double n = g.dimension(), p = params_.p(), a = params_.a(), b = params_.b(), c = params_.c();
  const double area = g.sphere_area();

  const auto mphi = cell_moments(g, n - 1.0 - a * p);
  cell_w_ = mphi.w0;
  for (double& w : cell_w_) w *= area;
  j_w_ = hat_weights(cell_moments(g, n - 1.0 - (a + 1.0) * p + c));
  for (double& w : j_w_) w *= area;
  crit_w_ = hat_weights(cell_moments(g, n - 1.0 - b * q_));
  for (double& w : crit_w_) w *= area;

  // Phi(phi_j) = W_{j-1}/h_{j-1}^p + W_j/h_j^p.
  hat_norm_.assign(g.size(), 0.0);
  for (std::size_t i = 0; i < g.cells(); ++i) {
    const double t = cell_w_[i] * std::pow(g.width(i), -p);
    hat_norm_[i] += t;
    hat_norm_[i + 1] += t;
  }
  for (double& h : hat_norm_) h = std::pow(h, 1.0 / p);
}

double DiscreteFunctionals::phi(std::span<const double> u) const {
  const auto& g = *grid_;
  const double p = params_.p();
  double sum = 0.0;
  if (p == 2.0) {
    for (std::size_t i = 0; i < g.cells(); ++i) {
      const double s = (u[i + 1] - u[i]) / g.width(i);
      sum += cell_w_[i] * s * s;
    }
  } else {
    for (std::size_t i = 0; i < g.cells(); ++i) {
      sum += cell_w_[i] * std::pow(std::abs((u[i + 1] - u[i]) / g.width(i)), p);
    }
  }
  return sum;
}

double DiscreteFunctionals::j(std::span<const double> u) const {
  const double p = params_.p();
  double sum = 0.0;
  if (p == 2.0) {
    for (std::size_t i = 0; i < u.size(); ++i) sum += j_w_[i] * u[i] * u[i];
  } else {
    for (std::size_t i = 0; i < u.size(); ++i) sum += j_w_[i] * std::pow(std::abs(u[i]), p);
  }
  return sum;
}

double DiscreteFunctionals::crit(std::span<const double> u) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) sum += crit_w_[i] * std::pow(std::abs(u[i]), q_);
  return sum;
}

void DiscreteFunctionals::grad_phi(std::span<const double> u, std::span<double> out) const {
  const auto& g = *grid_;
  const double p = params_.p();
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < g.cells(); ++i) {
    const double h = g.width(i);
    const double s = (u[i + 1] - u[i]) / h;
    const double flux = p * cell_w_[i] * (p == 2.0 ? s : signed_pow(s, p - 1.0)) / h;
    out[i] -= flux;
    out[i + 1] += flux;
  }
}

void DiscreteFunctionals::grad_j(std::span<const double> u, std::span<double> out) const {
  const double p = params_.p();
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = p * j_w_[i] * (p == 2.0 ? u[i] : signed_pow(u[i], p - 1.0));
}

void DiscreteFunctionals::grad_crit(std::span<const double> u, std::span<double> out) const {
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = q_ * crit_w_[i] * signed_pow(u[i], q_ - 1.0);
}

std::vector<double> DiscreteFunctionals::hessian_conductances(std::span<const double> u) const {
  const auto& g = *grid_;
  const double p = params_.p();
  std::vector<double> kappa(g.cells());
  if (p == 2.0) {
    for (std::size_t i = 0; i < g.cells(); ++i) kappa[i] = 2.0 * cell_w_[i] / (g.width(i) * g.width(i));
    return kappa;
  }
  double smax = 0.0;
  for (std::size_t i = 0; i < g.cells(); ++i) smax = std::max(smax, std::abs((u[i + 1] - u[i]) / g.width(i)));
  const double floor = std::max(1e-3 * smax, 1e-300);
  for (std::size_t i = 0; i < g.cells(); ++i) {
    const double h = g.width(i);
    const double s = std::max(std::abs((u[i + 1] - u[i]) / h), floor);
    kappa[i] = p * (p - 1.0) * cell_w_[i] * std::pow(s, p - 2.0) / (h * h);
  }
  return kappa;
}

void solve_tridiagonal(std::span<const double> diag, std::span<const double> off, std::span<double> rhs) {
  const std::size_t n = diag.size();
  if (n == 0) return;
  std::vector<double> c(n, 0.0);
  double denom = diag[0];
  if (denom == 0.0) throw InputError("solve_tridiagonal: zero pivot");
  c[0] = n > 1 ? off[0] / denom : 0.0;
  rhs[0] /= denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = diag[i] - off[i - 1] * c[i - 1];
    if (denom == 0.0) throw InputError("solve_tridiagonal: zero pivot");
    c[i] = i + 1 < n ? off[i] / denom : 0.0;
    rhs[i] = (rhs[i] - off[i - 1] * rhs[i - 1]) / denom;
  }
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c[i] * rhs[i + 1];
}

}  // namespace cknlab
