#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cknlab/grid.hpp"
#include "cknlab/params.hpp"

namespace cknlab {

/// Q_lambda(u) = (Phi(u) - lambda J(u)) / (int |x|^{-bq}|u|^q)^{p/q}.
/// Throws InputError for a field with zero q-integral.
double nehari_quotient(const CknParams& params, const RadialField& field, double lambda);

struct PeakScaling {
  double t_star;       // maximizer of t -> E_lambda(t u)
  double peak_energy;  // E_lambda(t_star u) = (d/n) Q_lambda(u)^{n/(dp)}
};

/// Maximum of E_lambda along the ray through `field`:
///   t_star = ((Phi - lambda J) / int|x|^{-bq}|u|^q)^{1/(q-p)},
/// which reduces to (Phi - lambda J)^{1/(q-p)} for unit q-norm.
/// Throws QuotientSignError("nonpositive quotient direction") if Phi - lambda J <= 0.
PeakScaling peak_scaling(const CknParams& params, const RadialField& field, double lambda);

/// Energy level (d/n) S_R^{n/(dp)} below which Palais-Smale sequences are
/// compact. Throws UnsupportedError at d = 0.
double threshold(const CknParams& params);

/// Weak-form residual of -div(|x|^{-ap}|Du|^{p-2}Du) = |x|^{-bq}|u|^{q-2}u
/// + lambda |x|^{-(a+1)p+c}|u|^{p-2}u against every hat function not
/// vanishing at the origin side of r = R, each divided by the hat's
/// gradient p-norm. The maximum is reported relative to the same maximum
/// taken over the absolute values of the three terms; 0 for u = 0.
double pde_residual(const CknParams& params, const RadialField& field, double lambda);

/// Fraction of int |x|^{-bq}|u|^q carried by B_{0.05R}.
double concentration_fraction(const CknParams& params, const RadialField& field);

struct SolveOptions {
  double tol = 1e-10;          // relative quotient change between accepted steps
  int max_iters = 20000;
  double residual_tol = 1e-6;  // pde_residual required for convergence
  double eps_min = 1e-6, eps_max = 1e-2;
  int eps_count = 13;          // sweep used to pick the bubble start
};

struct MinimizeResult {
  RadialField field;  // unit q-norm, nonnegative, u(R) = 0
  double quotient;
  int iterations;
  std::string status;  // "converged", "concentration", "maxiter"
};

/// Preconditioned projected gradient descent on Q_lambda from `start`:
/// the direction solves the tridiagonal model Hessian of Phi against
/// -grad Q, steps are Armijo-backtracked, iterates are replaced by |u|
/// with u(R) = 0 and renormalized to unit q-norm. Stops when the
/// quotient change is below tol and pde_residual below residual_tol, or,
/// if detect_concentration, once Q <= 1.01 S_R with more than 99% of the
/// q-mass inside B_{0.05R}. Throws QuotientSignError if Q_lambda(start) <= 0.
MinimizeResult minimize_quotient(const CknParams& params, const RadialField& start, double lambda,
                                 const SolveOptions& opts = {}, bool detect_concentration = true);

/// Outcome of one start of the multi-start minimization.
struct Candidate {
  int start;
  double quotient;
  double amplitude;  // max |t_star u|
  std::string status;
  RadialField field;  // Nehari-scaled
};

struct SolveReport {
  double lambda;
  RadialField field;  // Nehari-scaled candidate t_star * u
  double quotient;
  double energy;
  double t_star;
  double threshold;
  double margin;  // threshold - energy
  double pde_residual;
  double pohozaev_relative;
  double concentration_fraction;
  bool converged;
  std::string status;  // "converged", "concentration", "maxiter"
  int iterations;
  int start;  // 0 bubble, 1 eigenfunction, 2 parabola
  std::vector<Candidate> candidates;
};

/// Minimizes Q_lambda by preconditioned projected gradient descent with
/// q-norm renormalization from three starts (best sweep bubble, first
/// eigenfunction, parabola), run concurrently; the lowest quotient wins,
/// ties going to the lower start index. Requires 0 < lambda < lambda_1.
SolveReport ground_state(const CknParams& params, const GridPtr& grid, double lambda, const SolveOptions& opts = {});

struct ProbeLevel {
  int nodes;
  double quotient;
  double concentration_fraction;
  double certificate;  // Pohozaev violation of the Nehari-scaled candidate
  double amplitude;    // max |candidate|
  double min_certificate;  // over all starts' candidates with amplitude >= 0.01
  bool converged;
  std::string status;
};

struct ProbeReport {
  double lambda;
  double s_r;
  std::vector<ProbeLevel> levels;
};

/// Runs the ground-state minimization for lambda <= 0 on successively
/// refined grids (radius R, the given node counts).
ProbeReport nonexistence_probe(const CknParams& params, double radius, double lambda,
                               const std::vector<int>& node_counts = {1024, 2048, 4096},
                               const SolveOptions& opts = {});

}  // namespace cknlab
