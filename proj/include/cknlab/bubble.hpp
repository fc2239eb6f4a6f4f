#pragma once

#include <array>
#include <vector>

#include "cknlab/grid.hpp"
#include "cknlab/params.hpp"

namespace cknlab {

/// Truncated, normalized bubble v_eps = psi U_eps / ||psi U_eps||_{q,b} on B_R.
/// psi = 1 on [0,R/4], 1-3s^2+2s^3 with s=(r-R/4)/(R/4) on [R/4,R/2], 0 beyond.
class BubbleProfile {
 public:
  /// Normalization is computed by Gauss quadrature on `grid`.
  BubbleProfile(const CknParams& params, const GridPtr& grid, double eps);

  double eps() const noexcept { return eps_; }
  double value(double r) const;
  double derivative(double r) const;
  /// Breakpoints of the cutoff, R/4 and R/2.
  std::array<double, 2> breaks() const noexcept { return {radius_ / 4.0, radius_ / 2.0}; }
  double normalization() const noexcept { return norm_; }  // ||psi U_eps||_{q,b}

 private:
  double raw(double r) const;
  double raw_derivative(double r) const;

  CknParams params_;
  double eps_, radius_, eta_, m_, norm_ = 1.0;
};

double cutoff(double r, double radius);
double cutoff_derivative(double r, double radius);

/// Nodal v_eps normalized so that the grid quadrature gives unit weighted
/// q-norm. Throws InputError if r_1 > eps^{1/eta}/10.
RadialField make_bubble(const CknParams& params, const GridPtr& grid, double eps);

struct BubbleRecord {
  double eps;
  double grad_p;                     // ||Dv||_p^p with weight |x|^{-ap}
  double grad_correction;            // grad_p - S_R
  std::array<double, 4> grad_alpha;  // alpha = 1, 2, p-2, p-1 (NaN if alpha < 0)
  double pert;                       // ||v||_p^p with weight |x|^{-(a+1)p+c}
  double qnorm;                      // ||v||_{q} with weight |x|^{-bq}
};

/// All rate-relevant norms of v_eps by cellwise Gauss quadrature on the grid.
BubbleRecord bubble_report(const CknParams& params, const GridPtr& grid, double eps);
BubbleRecord bubble_report(const CknParams& params, const GridPtr& grid, double eps, double s_r);

/// Records for every eps; evaluated concurrently, returned in input order.
std::vector<BubbleRecord> sweep(const CknParams& params, const GridPtr& grid, const std::vector<double>& eps_list);

/// n geometric values from eps_max down to eps_min.
std::vector<double> geometric_eps(double eps_min, double eps_max, int count);

struct AtomReport {
  double eps;
  double delta;
  double nu_atom;  // int_{B_delta} |x|^{-bq}|v|^q, in [0, 1]
  double mu_atom;  // int_{B_delta} |x|^{-ap}|Dv|^p
  double slack;    // mu_atom - S_R nu_atom^{p/q}
};

std::vector<AtomReport> atom_check(const CknParams& params, const GridPtr& grid,
                                   const std::vector<double>& eps_sequence, double delta);

}  // namespace cknlab
