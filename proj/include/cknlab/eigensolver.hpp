#pragma once

#include "cknlab/functionals.hpp"
#include "cknlab/grid.hpp"
#include "cknlab/params.hpp"

namespace cknlab {

/// First eigenpair of -div(|x|^{-ap}|Du|^{p-2}Du) = lambda |x|^{-(a+1)p+c}|u|^{p-2}u
/// with u(R) = 0, restricted to radial fields.
struct EigenPair {
  double lambda1;
  RadialField e1;  // J(e1) = 1, e1 >= 0
  int iterations;
  double residual;  // last relative change of the Rayleigh quotient
  bool converged;
};

struct EigenOptions {
  double tol = 1e-10;
  int max_iters = 100000;
};

/// Preconditioned projected descent on Phi/J from u0 = 1 - (r/R)^2, with
/// J = 1 renormalization, Armijo backtracking, and |u| projection.
/// The returned lambda1 is the Rayleigh value of a feasible field, hence an
/// upper bound for the discrete first eigenvalue.
EigenPair first_eigenpair(const CknParams& params, const GridPtr& grid, const EigenOptions& opts = {});

/// Phi(u)/J(u); throws InputError if J(u) = 0.
double rayleigh_lambda(const CknParams& params, const RadialField& field);

}  // namespace cknlab
