#pragma once

#include <string>
#include <vector>

#include "cknlab/grid.hpp"
#include "cknlab/params.hpp"

namespace cknlab {

/// Source g(x,u) of -div(|x|^{-ap}|Du|^{p-2}Du) = g sampled along a field,
/// with its primitive G = int_0^u g and the radial derivative x.G_x at fixed
/// u. The arrays hold r^s times each quantity (s = radial_power) so that
/// sources singular at the origin stay finite at r = 0.
struct SourceSpec {
  std::string id;
  double radial_power = 0.0;
  std::vector<double> g, G, xGx;
};

/// Built-in sources:
///   "constant6"  g = 6            (u = 1 - r^2 solves it for n = 3, p = 2, a = 0)
///   "inverse_r"  g = 2/r          (u = 1 - r)
///   "problem"    g = lambda |x|^{-(a+1)p+c}|u|^{p-2}u + |x|^{-bq}|u|^{q-2}u
std::vector<std::string> source_catalog();
SourceSpec make_source(const std::string& id, const CknParams& params, const RadialField& field,
                       double lambda = 0.0);

struct IdentityReport {
  double lhs;
  double rhs;
  double residual;  // lhs - rhs
  double relative;  // |residual| / max(|lhs|, |rhs|, 1e-30)
};

IdentityReport make_identity_report(double lhs, double rhs);

/// u'(R) from the three-node one-sided difference.
double boundary_derivative(const RadialField& field);

/// Radial Pucci-Serrin identity with h = x on B_R:
///   (1 - 1/p) |S^{n-1}| R^{n-ap} |u'(R)|^p
///     = |S^{n-1}| int r^{n-1} [n G + x.G_x + (1 + a - n/p) u g] dr.
IdentityReport pucci_serrin_check(const CknParams& params, const RadialField& field, const SourceSpec& source);

/// Pohozaev identity for the perturbed critical problem:
///   (1 - 1/p) |S^{n-1}| R^{n-ap} |u'(R)|^p
///     = (c lambda / p) |S^{n-1}| int r^{n-1-(a+1)p+c} |u|^p dr.
IdentityReport pohozaev_residual(const CknParams& params, const RadialField& field, double lambda);

/// Same identity with the boundary term taken without the |x|^{-ap}
/// weight, i.e. R^n in place of R^{n-ap}. Coincides with the above for a = 0.
IdentityReport pohozaev_residual_unweighted(const CknParams& params, const RadialField& field, double lambda);

/// max(lhs, -rhs) of the Pohozaev identity for lambda <= 0, where lhs >= 0
/// and rhs <= 0 for every field; positive for any nontrivial candidate.
double nonexistence_certificate(const CknParams& params, const RadialField& field, double lambda);

}  // namespace cknlab
