#pragma once

#include "cknlab/params.hpp"

namespace cknlab {

/// Closed-form radial extremal of the weighted Sobolev-Hardy quotient,
///   U(r) = c0 * ((n-p-pa) / (1 + r^eta))^m,   m = (n-dp)/(dp),
/// optionally dilated: U_s(r) = U(r/s).
class ExtremalProfile {
 public:
  explicit ExtremalProfile(const CknParams& params, double dilation = 1.0);

  const CknParams& params() const noexcept { return params_; }
  double eta() const noexcept { return eta_; }
  double shape_exponent() const noexcept { return m_; }
  double amplitude() const noexcept { return amplitude_; }  // U(0)
  double dilation() const noexcept { return scale_; }

  double value(double r) const;
  double derivative(double r) const;

 private:
  CknParams params_;
  double eta_, m_, amplitude_, scale_;
};

/// U_{a,b}(r); throws UnsupportedError at d = 0.
double extremal_value(const CknParams& params, double r);

/// U_eps(r) = (eps + r^eta)^{-(n-dp)/(dp)}.
double bubble_value(const CknParams& params, double eps, double r);
/// r-derivative of U_eps.
double bubble_derivative(const CknParams& params, double eps, double r);
/// k(eps) = c0 (eps (n-p-ap))^{(n-dp)/(dp)}; k(eps) U_eps(r) = U(r / eps^{1/eta}).
double k_eps(const CknParams& params, double eps);

/// Whole-line radial quadrature settings.
struct WholeLineOptions {
  double r_inf = 1e6;        // tail series beyond r_inf (or beyond (r/s)^eta = 1e3 if larger)
  double head_rel = 1e-4;    // head series below head_rel * s (or below (r/s)^eta = 1e-3 if smaller)
  double tol = 1e-8;         // required relative agreement of two panel densities
};

struct PowerIntegral {
  double value;
  double achieved_tol;  // |I(h) - I(h/2)| / |I(h/2)|
};

/// I = int_0^inf r^A (1 + (r/s)^eta)^{-B} dr by head series + composite
/// Gauss-Legendre in log (r/s)^eta + tail series. Needs A > -1 and eta*B > A + 1.
PowerIntegral power_profile_integral(double A, double eta, double B, double scale = 1.0,
                                     const WholeLineOptions& opts = {});

struct BestConstant {
  double value;         // S_R(a,b) = grad_p / q_int^{p/q}
  double grad_p;        // int |x|^{-ap} |DU|^p over R^n
  double q_int;         // int |x|^{-bq} |U|^q over R^n
  double achieved_tol;
};

/// Radial best constant S_R(a,b) as the CKN quotient of the (dilated)
/// extremal, by whole-line quadrature. Throws ConvergenceError if the
/// achieved tolerance misses opts.tol.
BestConstant s_radial(const CknParams& params, double dilation = 1.0, const WholeLineOptions& opts = {});

/// Surface measure of the unit (n-1)-sphere, 2 pi^{n/2} / Gamma(n/2).
double sphere_area(int n);

}  // namespace cknlab
