#include "cknlab/pohozaev.hpp"

#include <algorithm>
#include <cmath>

#include "cknlab/errors.hpp"
#include "cknlab/quadrature.hpp"

namespace cknlab {

std::vector<std::string> source_catalog() { return {"constant6", "inverse_r", "problem"}; }

SourceSpec make_source(const std::string& id, const CknParams& params, const RadialField& field, double lambda) {
  const auto& grid = field.grid();
  const std::size_t n = field.size();
  SourceSpec s;
  s.id = id;
  s.g.resize(n);
  s.G.resize(n);
  s.xGx.resize(n);
  if (id == "constant6") {
    for (std::size_t i = 0; i < n; ++i) {
      s.g[i] = 6.0;
      s.G[i] = 6.0 * field[i];
      s.xGx[i] = 0.0;
    }
  } else if (id == "inverse_r") {
    // Stored times r.
    s.radial_power = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      s.g[i] = 2.0;
      s.G[i] = 2.0 * field[i];
      s.xGx[i] = -2.0 * field[i];
    }
  } else if (id == "problem") {
    const double p = params.p();
    const double q = derive_exponents(params).q;
    const double alpha = (params.a() + 1.0) * p - params.c();
    const double beta = params.b() * q;
    s.radial_power = std::max({0.0, alpha, beta});
    for (std::size_t i = 0; i < n; ++i) {
      const double r = grid[i], u = field[i], au = std::abs(u);
      // r^{s - alpha} and r^{s - beta}; exponents are >= 0, with 0^0 = 1.
      const double wa = std::pow(r, s.radial_power - alpha);
      const double wb = std::pow(r, s.radial_power - beta);
      const double up = std::pow(au, p), uq = std::pow(au, q);
      const double gp = lambda * std::pow(au, p - 1.0) * (u < 0 ? -1.0 : 1.0);
      const double gq = std::pow(au, q - 1.0) * (u < 0 ? -1.0 : 1.0);
      s.g[i] = wa * gp + wb * gq;
      s.G[i] = wa * lambda * up / p + wb * uq / q;
      s.xGx[i] = -alpha * wa * lambda * up / p - beta * wb * uq / q;
    }
  } else {
    throw InputError("unknown source: " + id);
  }
  return s;
}

IdentityReport make_identity_report(double lhs, double rhs) {
  const double residual = lhs - rhs;
  const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-30});
  return {lhs, rhs, residual, std::abs(residual) / scale};
}

double boundary_derivative(const RadialField& field) {
  const auto& g = field.grid();
  const std::size_t M = g.size() - 1;
  const double x0 = g[M - 2], x1 = g[M - 1], x2 = g[M];
  return field[M - 2] * (x2 - x1) / ((x0 - x1) * (x0 - x2)) + field[M - 1] * (x2 - x0) / ((x1 - x0) * (x1 - x2)) +
         field[M] * (2.0 * x2 - x0 - x1) / ((x2 - x0) * (x2 - x1));
}

namespace {

void require_dirichlet(const RadialField& field) {
  if (!field.is_dirichlet()) throw InputError("identity: field must vanish at r = R");
}

double boundary_term(const CknParams& params, const RadialField& field, double radius_power) {
  const auto& g = field.grid();
  const double p = params.p();
  return (1.0 - 1.0 / p) * g.sphere_area() * std::pow(g.radius(), radius_power) *
         std::pow(std::abs(boundary_derivative(field)), p);
}

double pohozaev_volume(const CknParams& params, const RadialField& field, double lambda) {
  const auto& g = field.grid();
  const double p = params.p();
  std::vector<double> up(field.size());
  for (std::size_t i = 0; i < up.size(); ++i) up[i] = std::pow(std::abs(field[i]), p);
  const double k = g.dimension() - 1.0 - (params.a() + 1.0) * p + params.c();
  return params.c() * lambda / p * g.sphere_area() * integrate_nodal(g, up, k, NodalRule::quadratic);
}

}  // namespace

IdentityReport pucci_serrin_check(const CknParams& params, const RadialField& field, const SourceSpec& source) {
  const std::size_t n = field.size();
  if (source.g.size() != n || source.G.size() != n || source.xGx.size() != n) {
    throw InputError("pucci_serrin_check: source arrays do not conform to the grid");
  }
  require_dirichlet(field);
  const auto& g = field.grid();
  const double dim = g.dimension();
  const double A = 1.0 + params.a() - dim / params.p();
  std::vector<double> integrand(n);
  for (std::size_t i = 0; i < n; ++i) {
    integrand[i] = dim * source.G[i] + source.xGx[i] + A * field[i] * source.g[i];
  }
  const double k = dim - 1.0 - source.radial_power;
  if (!(k > -1.0)) throw InputError("pucci_serrin_check: source too singular at the origin");
  const double rhs = g.sphere_area() * integrate_nodal(g, integrand, k, NodalRule::quadratic);
  const double lhs = boundary_term(params, field, dim - params.a() * params.p());
  return make_identity_report(lhs, rhs);
}

IdentityReport pohozaev_residual(const CknParams& params, const RadialField& field, double lambda) {
  require_dirichlet(field);
  const double dim = field.grid().dimension();
  return make_identity_report(boundary_term(params, field, dim - params.a() * params.p()),
                              pohozaev_volume(params, field, lambda));
}

IdentityReport pohozaev_residual_unweighted(const CknParams& params, const RadialField& field, double lambda) {
  require_dirichlet(field);
  return make_identity_report(boundary_term(params, field, field.grid().dimension()),
                              pohozaev_volume(params, field, lambda));
}

double nonexistence_certificate(const CknParams& params, const RadialField& field, double lambda) {
  if (lambda > 0.0) throw InputError("nonexistence_certificate: requires lambda <= 0");
  const auto rep = pohozaev_residual(params, field, lambda);
  return std::max(rep.lhs, -rep.rhs);
}

}  // namespace cknlab
