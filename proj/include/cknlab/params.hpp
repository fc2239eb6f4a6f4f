#pragma once

#include <optional>

#include "cknlab/errors.hpp"

namespace cknlab {

/// Validated problem parameters of the weighted critical problem
///   -div(|x|^{-ap}|Du|^{p-2}Du) = |x|^{-bq}|u|^{q-2}u + lambda |x|^{-(a+1)p+c}|u|^{p-2}u.
///
/// Only `validate_params` produces instances, so every CknParams in the
/// program satisfies 1<p<n, a<(n-p)/p, a<=b<=a+1, c>0.
class CknParams {
 public:
  int n() const noexcept { return n_; }
  double p() const noexcept { return p_; }
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double c() const noexcept { return c_; }

  /// d = 1 + a - b, in [0, 1].
  double d() const noexcept { return 1.0 + a_ - b_; }

  /// b = a + 1: valid, but the critical exponent degenerates to q = p and
  /// no bubble/solver operation is defined.
  bool hardy_endpoint() const noexcept { return d() <= 0.0; }

  /// Same parameters with a different perturbation offset c.
  CknParams with_c(double c) const;

  friend CknParams validate_params(double n, double p, double a, double b, double c);

 private:
  CknParams(int n, double p, double a, double b, double c) : n_(n), p_(p), a_(a), b_(b), c_(c) {}

  int n_;
  double p_, a_, b_, c_;
};

CknParams validate_params(double n, double p, double a, double b, double c);

struct DerivedExponents {
  double d;
  double q;          // np/(n-dp)
  double cstar;      // (n-p-ap)/(p-1)
  double gap_coeff;  // d/n = 1/p - 1/q
  // Undefined at the Hardy endpoint d = 0.
  std::optional<double> eta;         // radial power in the extremal profile
  std::optional<double> c0;          // extremal amplitude constant
  std::optional<double> nehari_exp;  // n/(dp) = q/(q-p)
};

DerivedExponents derive_exponents(const CknParams& params);

/// n - p - ap, positive for admissible parameters.
inline double hardy_gap(const CknParams& prm) { return prm.n() - prm.p() - prm.a() * prm.p(); }

/// Throws UnsupportedError at d = 0; `what` names the caller.
void require_positive_d(const CknParams& prm, const char* what);

}  // namespace cknlab
