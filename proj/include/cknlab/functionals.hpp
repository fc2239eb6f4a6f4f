#pragma once

#include <span>
#include <vector>

#include "cknlab/grid.hpp"
#include "cknlab/params.hpp"

namespace cknlab {

// Radial versions of the problem's integral functionals on B_R. All use the
// per-cell rule of quadrature.hpp: the gradient term is exact for
// piecewise-linear fields; the potential terms interpolate |u|^s linearly.

/// Phi(u) = int |x|^{-ap} |Du|^p dx.
double energy_phi(const CknParams& params, const RadialField& field);
/// J(u) = int |x|^{-(a+1)p+c} |u|^p dx.
double energy_j(const CknParams& params, const RadialField& field);
/// int |x|^{-bq} |u|^q dx.
double critical_integral(const CknParams& params, const RadialField& field);
/// E_lambda(u) = Phi/p - (1/q) int |x|^{-bq}|u|^q - (lambda/p) J.
double energy_total(const CknParams& params, const RadialField& field, double lambda);
/// E_{a,b}(u) = Phi(u) / (int |x|^{-bq}|u|^q)^{p/q}.
double rayleigh_ckn(const CknParams& params, const RadialField& field);

/// Precomputed weights for repeated evaluation of Phi, J and the critical
/// integral, their nodal gradients, and a tridiagonal model Hessian of Phi.
class DiscreteFunctionals {
 public:
  DiscreteFunctionals(const CknParams& params, GridPtr grid);

  const CknParams& params() const noexcept { return params_; }
  const RadialGrid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  double q() const noexcept { return q_; }

  double phi(std::span<const double> u) const;
  double j(std::span<const double> u) const;
  double crit(std::span<const double> u) const;

  // Gradients with respect to nodal values (all nodes, including r = R).
  void grad_phi(std::span<const double> u, std::span<double> out) const;
  void grad_j(std::span<const double> u, std::span<double> out) const;
  void grad_crit(std::span<const double> u, std::span<double> out) const;

  /// Cell conductances of the frozen-slope Hessian of Phi,
  /// p(p-1) W_i max(|s_i|, floor)^{p-2} / h_i^2, floor = 1e-3 max|s|.
  std::vector<double> hessian_conductances(std::span<const double> u) const;

  /// Hat-function p-norms, Phi(phi_j)^{1/p}.
  const std::vector<double>& hat_norms() const noexcept { return hat_norm_; }

  std::span<const double> cell_weights() const noexcept { return cell_w_; }  // W_i
  std::span<const double> j_weights() const noexcept { return j_w_; }
  std::span<const double> crit_weights() const noexcept { return crit_w_; }

 private:
  CknParams params_;
  GridPtr grid_;
  double q_;
  std::vector<double> cell_w_;  // sphere_area * int_cell r^{n-1-ap}
  std::vector<double> j_w_;     // sphere_area * int r^{n-1-(a+1)p+c} phi_j
  std::vector<double> crit_w_;  // sphere_area * int r^{n-1-bq} phi_j
  std::vector<double> hat_norm_;
};

/// Solve the tridiagonal system with sub/super diagonal `off` (size n-1).
/// Thomas algorithm; intended for the symmetric positive definite model
/// Hessians assembled by the solvers.
void solve_tridiagonal(std::span<const double> diag, std::span<const double> off, std::span<double> rhs);

}  // namespace cknlab
