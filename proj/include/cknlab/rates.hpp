#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "cknlab/bubble.hpp"
#include "cknlab/params.hpp"

namespace cknlab {

struct RateFit {
  double slope;
  double intercept;
  double stderr_slope;
  double r_squared;
  bool log_factor;  // power-times-|log eps| model preferred
};

/// Least squares of log(value) against log(eps). The power-times-log model
/// log(value) = c + s log(eps) + log|log eps| is accepted when it cuts the
/// residual sum of squares by at least half; its slope is then reported.
/// Needs >= 5 geometrically spaced eps < 1 and positive values.
RateFit fit_rate(std::span<const double> eps, std::span<const double> values);

enum class RateQuantity { grad_correction, alpha1, alpha2, alpha_pm2, alpha_pm1, pert };

const char* to_string(RateQuantity q);
RateQuantity rate_quantity_from_string(const std::string& name);

RateFit fit_rate(const std::vector<BubbleRecord>& records, RateQuantity which);

/// Records whose core scale eps^{1/eta} is at most R/40, a tenth of the
/// cutoff onset, where higher-order cutoff terms are negligible. Falls back
/// to the five smallest eps when fewer qualify.
std::vector<BubbleRecord> asymptotic_window(const CknParams& params, double radius,
                                            const std::vector<BubbleRecord>& records);

struct RateExponent {
  double exponent;
  bool log_factor;
};

/// Predicted eps-exponents for the bubble norms. `paper_claimed` transcribes
/// the published rates; `scaling_derived` comes from dilation counting of
/// the core integrals against the O(1) contribution of the cutoff region.
struct RateTable {
  RateExponent paper_item1, scaling_item1;
  std::array<double, 4> alphas;
  std::array<RateExponent, 4> paper_item2, scaling_item2;
  RateExponent paper_item3, scaling_item3;
  std::string regime;  // "c>c*", "c=c*", "c<c*"
};

RateTable rate_table(const CknParams& params);

}  // namespace cknlab
