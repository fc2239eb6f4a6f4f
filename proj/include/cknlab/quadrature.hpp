#pragma once

#include <functional>
#include <span>
#include <vector>

#include "cknlab/grid.hpp"

namespace cknlab {

/// Exact power-weight moments per cell [r_i, r_{i+1}]:
///   w0[i] = int r^k dr,   w1[i] = int r^k (r - r_i)/h_i dr.
/// Requires k > -1 (integrability on the first cell).
struct CellMoments {
  double exponent;
  std::vector<double> w0, w1;
};

CellMoments cell_moments(const RadialGrid& grid, double k);

/// Nodal weights of the hat functions, int r^k phi_j dr (without the sphere
/// area), so that int r^k Pi(f) dr = sum_j f_j * weights[j].
std::vector<double> hat_weights(const CellMoments& m);

/// int_{B_R} |x|^{-alpha} |u|^s dx, with |u|^s interpolated linearly between
/// nodes and the power weight r^{n-1-alpha} integrated exactly per cell.
double weighted_integral(const RadialField& field, double alpha, double s);

/// Same integrand restricted to the ball B_rmax (rmax <= R).
double weighted_integral_ball(const RadialField& field, double alpha, double s, double rmax);

enum class NodalRule { linear, quadratic };

/// int_0^R r^k Pi(phi) dr for nodal samples phi (no sphere area). The
/// quadratic rule averages the two three-node interpolants covering each
/// interior cell and is exact for quadratics.
double integrate_nodal(const RadialGrid& grid, std::span<const double> phi, double k,
                       NodalRule rule = NodalRule::linear);

/// int_{B_R} |x|^{-alpha} f(|x|) dx for an analytic radial integrand f, by
/// 8-point Gauss-Legendre on every cell (split at `breaks`). The first cell
/// uses the substitution t = (r/r_1)^{k+1} to absorb the weight singularity.
double integrate_function(const RadialGrid& grid, const std::function<double(double)>& f, double alpha,
                          std::span<const double> breaks = {}, double rmax = -1.0);

}  // namespace cknlab
