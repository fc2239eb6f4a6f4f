#include "cknlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

#include "cknlab/bubble.hpp"
#include "cknlab/eigensolver.hpp"
#include "cknlab/errors.hpp"
#include "cknlab/extremal.hpp"
#include "cknlab/functionals.hpp"
#include "cknlab/pohozaev.hpp"
#include "cknlab/quadrature.hpp"

namespace cknlab {

double nehari_quotient(const CknParams& params, const RadialField& field, double lambda) {
  const double q = derive_exponents(params).q;
  const double den = critical_integral(params, field);
  if (!(den > 0.0)) throw InputError("nehari_quotient: field has zero q-norm");
  return (energy_phi(params, field) - lambda * energy_j(params, field)) / std::pow(den, params.p() / q);
}

PeakScaling peak_scaling(const CknParams& params, const RadialField& field, double lambda) {
  require_positive_d(params, "peak_scaling");
  const double p = params.p(), q = derive_exponents(params).q;
  const double crit = critical_integral(params, field);
  if (!(crit > 0.0)) throw InputError("peak_scaling: field has zero q-norm");
  const double top = energy_phi(params, field) - lambda * energy_j(params, field);
  if (!(top > 0.0)) throw QuotientSignError("nonpositive quotient direction");
  const double t = std::pow(top / crit, 1.0 / (q - p));
  return {t, (1.0 / p - 1.0 / q) * std::pow(top, q / (q - p)) * std::pow(crit, -p / (q - p))};
}

double threshold(const CknParams& params) {
  const auto ex = derive_exponents(params);
  if (!ex.nehari_exp) throw UnsupportedError("threshold: undefined at the Hardy endpoint d = 0");
  return ex.gap_coeff * std::pow(s_radial(params).value, *ex.nehari_exp);
}

namespace {

struct Residual {
  double value;
  std::size_t worst;
};

// Relative weak residual from the nodal gradients of Phi, J and the critical
// integral at a field u; t scales the potential terms as for t_star u.
Residual relative_residual(const DiscreteFunctionals& F, std::span<const double> gphi, std::span<const double> gj,
                           std::span<const double> gc, double lambda, double crit_scale) {
  const double p = F.params().p(), q = F.q();
  const auto& hn = F.hat_norms();
  double num = 0.0, den = 0.0;
  std::size_t worst = 0;
  for (std::size_t i = 0; i + 1 < gphi.size(); ++i) {
    const double A = gphi[i] / p, B = crit_scale * gc[i] / q, C = lambda * gj[i] / p;
    const double r = std::abs(A - B - C) / hn[i];
    if (r > num) {
      num = r;
      worst = i;
    }
    den = std::max(den, (std::abs(A) + std::abs(B) + std::abs(C)) / hn[i]);
  }
  return {den > 0.0 ? num / den : 0.0, worst};
}

double ball_fraction(const RadialGrid& g, std::span<const double> cw, std::span<const double> u, double q) {
  const double rmax = 0.05 * g.radius();
  double inside = 0.0, total = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double m = cw[i] * std::pow(std::abs(u[i]), q);
    total += m;
    if (g[i] <= rmax) inside += m;
  }
  return total > 0.0 ? inside / total : 0.0;
}

struct Run {
  std::vector<double> u;  // unit q-norm
  double quotient = 0.0;
  int iterations = 0;
  std::string status;
};

Run minimize(const DiscreteFunctionals& F, std::vector<double> u, double lambda, const SolveOptions& opts,
             double s_r, bool detect_concentration) {
  const auto& g = F.grid();
  const std::size_t N = g.size(), M = g.cells();
  const double p = F.params().p(), q = F.q();
  for (double& x : u) x = std::abs(x);
  u[M] = 0.0;
  auto normalize = [&](std::vector<double>& v) {
    const double c = F.crit(v);
    if (!(c > 0.0)) throw InputError("ground_state: start has zero q-norm");
    const double s = std::pow(c, -1.0 / q);
    for (double& x : v) x *= s;
  };
  normalize(u);
  auto quotient_of = [&](std::span<const double> v) { return F.phi(v) - lambda * F.j(v); };
  double Q = quotient_of(u);
  if (!(Q > 0.0)) throw QuotientSignError("nonpositive quotient direction");

  std::vector<double> gphi(N), gj(N), gc(N), grad(N), dir(N), trial(N), diag(M), off(M - 1);
  Run run;
  run.status = "maxiter";
  double change = 1.0;
  for (int it = 1; it <= opts.max_iters; ++it) {
    run.iterations = it;
    F.grad_phi(u, gphi);
    F.grad_j(u, gj);
    F.grad_crit(u, gc);
    // At unit q-norm the Nehari scale satisfies t^{q-p} = Q.
    const auto res = relative_residual(F, gphi, gj, gc, lambda, Q);
    if (res.value < opts.residual_tol && change < opts.tol) {
      run.status = "converged";
      break;
    }
    // Judged only after a descent step, so the verdict never rests on the start.
    if (detect_concentration && it > 1 && Q <= 1.01 * s_r && ball_fraction(g, F.crit_weights(), u, q) > 0.99) {
      run.status = "concentration";
      break;
    }
    for (std::size_t i = 0; i < N; ++i) grad[i] = gphi[i] - lambda * gj[i] - (p / q) * Q * gc[i];
    const auto kappa = F.hessian_conductances(u);
    std::fill(diag.begin(), diag.end(), 0.0);
    for (std::size_t i = 0; i < M; ++i) {
      diag[i] += kappa[i];
      if (i + 1 < M) {
        diag[i + 1] += kappa[i];
        off[i] = -kappa[i];
      }
    }
    for (std::size_t i = 0; i < M; ++i) dir[i] = -grad[i];
    solve_tridiagonal(diag, off, std::span<double>(dir.data(), M));
    dir[M] = 0.0;
    double slope = 0.0;
    for (std::size_t i = 0; i < M; ++i) slope += grad[i] * dir[i];
    if (!(slope < 0.0)) {
      run.status = res.value < opts.residual_tol ? "converged" : "maxiter";
      break;
    }
    double step = 1.0, next = Q;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      for (std::size_t i = 0; i < N; ++i) trial[i] = std::abs(u[i] + step * dir[i]);
      trial[M] = 0.0;
      const double ct = F.crit(trial);
      if (ct > 0.0) {
        next = quotient_of(trial) / std::pow(ct, p / q);
        if (next <= Q + 1e-4 * step * slope) {
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) {
      run.status = res.value < opts.residual_tol ? "converged" : "maxiter";
      break;
    }
    change = (Q - next) / Q;
    u.swap(trial);
    normalize(u);
    Q = quotient_of(u);
  }
  run.u = std::move(u);
  run.quotient = Q;
  return run;
}

std::vector<std::vector<double>> starts(const CknParams& params, const GridPtr& grid, double lambda,
                                        const SolveOptions& opts, const RadialField& e1) {
  const auto& g = *grid;
  std::vector<std::vector<double>> out;
  // Best bubble over the sweep, by Nehari quotient (equivalently peak energy).
  std::optional<RadialField> best;
  double best_q = 0.0;
  for (double eps : geometric_eps(opts.eps_min, opts.eps_max, opts.eps_count)) {
    try {
      auto v = make_bubble(params, grid, eps);
      const double Qv = nehari_quotient(params, v, lambda);
      if (Qv > 0.0 && (!best || Qv < best_q)) {
        best = std::move(v);
        best_q = Qv;
      }
    } catch (const InputError&) {
      // eps not resolved by this grid
    }
  }
  out.push_back(best ? std::vector<double>(best->values().begin(), best->values().end()) : std::vector<double>{});
  out.emplace_back(e1.values().begin(), e1.values().end());
  std::vector<double> parabola(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) parabola[i] = 1.0 - (g[i] / g.radius()) * (g[i] / g.radius());
  out.push_back(std::move(parabola));
  return out;
}

SolveReport solve_on_grid(const CknParams& params, const GridPtr& grid, double lambda, const SolveOptions& opts,
                          const RadialField& e1) {
  const DiscreteFunctionals F(params, grid);
  const double s_r = s_radial(params).value;
  const auto init = starts(params, grid, lambda, opts, e1);
  std::vector<std::future<Run>> jobs;
  for (const auto& u0 : init) {
    if (u0.empty()) {
      jobs.push_back(std::async(std::launch::deferred, [] { return Run{}; }));
      continue;
    }
    jobs.push_back(std::async(std::launch::async, [&, u0] { return minimize(F, u0, lambda, opts, s_r, true); }));
  }
  std::vector<Run> runs;
  for (auto& j : jobs) runs.push_back(j.get());
  int best = -1;
  for (int i = 0; i < static_cast<int>(runs.size()); ++i) {
    if (runs[i].u.empty()) continue;
    if (best < 0 || runs[i].quotient < runs[best].quotient) best = i;
  }
  const Run& run = runs[best];

  RadialField unit(grid, run.u);
  const auto peak = peak_scaling(params, unit, lambda);
  RadialField field = unit.scaled(peak.t_star);
  SolveReport rep{lambda, field, run.quotient, 0.0, peak.t_star, 0.0, 0.0, 0.0, 0.0, 0.0, false, run.status,
                  run.iterations, best, {}};
  rep.energy = energy_total(params, field, lambda);
  rep.threshold = threshold(params);
  rep.margin = rep.threshold - rep.energy;
  rep.pde_residual = pde_residual(params, field, lambda);
  rep.pohozaev_relative = pohozaev_residual(params, field, lambda).relative;
  rep.concentration_fraction = concentration_fraction(params, field);
  rep.converged = run.status == "converged";
  for (int i = 0; i < static_cast<int>(runs.size()); ++i) {
    if (runs[i].u.empty()) continue;
    RadialField ui(grid, runs[i].u);
    const double t = peak_scaling(params, ui, lambda).t_star;
    auto fi = ui.scaled(t);
    const double amp = fi.max_abs();
    rep.candidates.push_back({i, runs[i].quotient, amp, runs[i].status, std::move(fi)});
  }
  return rep;
}

}  // namespace

MinimizeResult minimize_quotient(const CknParams& params, const RadialField& start, double lambda,
                                 const SolveOptions& opts, bool detect_concentration) {
  const DiscreteFunctionals F(params, start.grid_ptr());
  const double s_r = detect_concentration ? s_radial(params).value : 0.0;
  auto run = minimize(F, std::vector<double>(start.values().begin(), start.values().end()), lambda, opts, s_r,
                      detect_concentration);
  return {RadialField(start.grid_ptr(), std::move(run.u)), run.quotient, run.iterations, run.status};
}

double pde_residual(const CknParams& params, const RadialField& field, double lambda) {
  if (!field.is_dirichlet()) throw InputError("pde_residual: field must vanish at r = R");
  const DiscreteFunctionals F(params, field.grid_ptr());
  const std::size_t N = field.size();
  std::vector<double> gphi(N), gj(N), gc(N);
  F.grad_phi(field.values(), gphi);
  F.grad_j(field.values(), gj);
  F.grad_crit(field.values(), gc);
  return relative_residual(F, gphi, gj, gc, lambda, 1.0).value;
}

double concentration_fraction(const CknParams& params, const RadialField& field) {
  const double total = critical_integral(params, field);
  if (!(total > 0.0)) return 0.0;
  const double q = derive_exponents(params).q;
  const double inside = weighted_integral_ball(field, params.b() * q, q, 0.05 * field.grid().radius());
  return std::clamp(inside / total, 0.0, 1.0);
}

SolveReport ground_state(const CknParams& params, const GridPtr& grid, double lambda, const SolveOptions& opts) {
  require_positive_d(params, "ground_state");
  if (!(lambda > 0.0)) throw InputError("ground_state: requires lambda > 0 (use the nonexistence probe otherwise)");
  const auto eig = first_eigenpair(params, grid);
  if (!(nehari_quotient(params, eig.e1, lambda) > 0.0)) throw QuotientSignError("nonpositive quotient direction");
  return solve_on_grid(params, grid, lambda, opts, eig.e1);
}

ProbeReport nonexistence_probe(const CknParams& params, double radius, double lambda,
                               const std::vector<int>& node_counts, const SolveOptions& opts) {
  require_positive_d(params, "nonexistence_probe");
  if (lambda > 0.0) throw InputError("nonexistence_probe: requires lambda <= 0");
  ProbeReport out{lambda, s_radial(params).value, {}};
  for (int nodes : node_counts) {
    const auto grid = RadialGrid::make_default(static_cast<int>(params.n()), radius, nodes);
    const auto eig = first_eigenpair(params, grid);
    const auto rep = solve_on_grid(params, grid, lambda, opts, eig.e1);
    double min_cert = std::numeric_limits<double>::infinity();
    for (const auto& cand : rep.candidates) {
      if (cand.amplitude >= 0.01) min_cert = std::min(min_cert, nonexistence_certificate(params, cand.field, lambda));
    }
    out.levels.push_back({nodes, rep.quotient, rep.concentration_fraction,
                          nonexistence_certificate(params, rep.field, lambda), rep.field.max_abs(), min_cert,
                          rep.converged, rep.status});
  }
  return out;
}

}  // namespace cknlab
