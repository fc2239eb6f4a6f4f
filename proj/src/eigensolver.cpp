#include "cknlab/eigensolver.hpp"

#include <cmath>
#include <vector>

#include "cknlab/errors.hpp"

namespace cknlab {

double rayleigh_lambda(const CknParams& params, const RadialField& field) {
  const double den = energy_j(params, field);
  if (!(den > 0.0)) throw InputError("rayleigh_lambda: J(field) must be positive");
  return energy_phi(params, field) / den;
}

EigenPair first_eigenpair(const CknParams& params, const GridPtr& grid, const EigenOptions& opts) {
  const DiscreteFunctionals F(params, grid);
  const auto& g = *grid;
  const std::size_t N = g.size(), M = g.cells();
  const double p = params.p(), R = g.radius();

  std::vector<double> u(N), trial(N), gphi(N), gj(N), dir(N), diag(M), off(M > 0 ? M - 1 : 0);
  for (std::size_t i = 0; i < N; ++i) u[i] = 1.0 - (g[i] / R) * (g[i] / R);
  u[M] = 0.0;
  auto normalize = [&](std::vector<double>& v) {
    const double s = std::pow(F.j(v), -1.0 / p);
    for (double& x : v) x *= s;
  };
  normalize(u);
  double quotient = F.phi(u);

  int it = 0;
  double change = 1.0;
  bool converged = false;
  while (it < opts.max_iters) {
    ++it;
    F.grad_phi(u, gphi);
    F.grad_j(u, gj);
    // Gradient of Phi/J at J = 1.
    for (std::size_t i = 0; i < N; ++i) dir[i] = -(gphi[i] - quotient * gj[i]);
    dir[M] = 0.0;
    double slope = 0.0;
    {
      const auto kappa = F.hessian_conductances(u);
      // Free nodes 0..M-1; node M is held at zero.
      std::fill(diag.begin(), diag.end(), 0.0);
      for (std::size_t i = 0; i < M; ++i) {
        diag[i] += kappa[i];
        if (i + 1 < M) {
          diag[i + 1] += kappa[i];
          off[i] = -kappa[i];
        }
      }
      std::vector<double> rhs(dir.begin(), dir.begin() + M);
      solve_tridiagonal(diag, off, rhs);
      for (std::size_t i = 0; i < M; ++i) {
        slope -= dir[i] * rhs[i];  // grad . d = -(-grad) . d
        dir[i] = rhs[i];
      }
    }
    if (!(slope < 0.0)) {
      converged = true;
      change = 0.0;
      break;
    }
    double step = 1.0, next = quotient;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      for (std::size_t i = 0; i < N; ++i) trial[i] = std::abs(u[i] + step * dir[i]);
      trial[M] = 0.0;
      const double jt = F.j(trial);
      if (jt > 0.0) {
        next = F.phi(trial) / jt;
        if (next <= quotient + 1e-4 * step * slope) {
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) {
      // No further decrease representable in double precision.
      change = 0.0;
      converged = true;
      break;
    }
    change = (quotient - next) / quotient;
    u.swap(trial);
    normalize(u);
    quotient = next;
    if (change < opts.tol) {
      converged = true;
      break;
    }
  }
  return EigenPair{F.phi(u) / F.j(u), RadialField(grid, u), it, change, converged};
}

}  // namespace cknlab
