#include "cknlab/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cknlab/gauss.hpp"

namespace cknlab {

double sphere_area(int n) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

ExtremalProfile::ExtremalProfile(const CknParams& params, double dilation) : params_(params), scale_(dilation) {
  require_positive_d(params, "extremal profile");
  if (!(dilation > 0.0)) throw InputError("extremal profile: dilation must be positive");
  const auto ex = derive_exponents(params);
  eta_ = *ex.eta;
  m_ = (params.n() - ex.d * params.p()) / (ex.d * params.p());
  amplitude_ = *ex.c0 * std::pow(hardy_gap(params), m_);
}

double ExtremalProfile::value(double r) const {
  const double x = r / scale_;
  return amplitude_ * std::pow(1.0 + std::pow(x, eta_), -m_);
}

double ExtremalProfile::derivative(double r) const {
  const double x = r / scale_;
  if (x == 0.0) {
    if (eta_ > 1.0) return 0.0;
    if (eta_ == 1.0) return -amplitude_ * m_ / scale_;
    return -HUGE_VAL;
  }
  return -amplitude_ * m_ * eta_ * std::pow(x, eta_ - 1.0) * std::pow(1.0 + std::pow(x, eta_), -m_ - 1.0) /
         scale_;
}

double extremal_value(const CknParams& params, double r) {
  if (!(r >= 0.0)) throw InputError("extremal_value: r must be >= 0");
  return ExtremalProfile(params).value(r);
}

namespace {

struct BubbleShape {
  double eta, m;
};

BubbleShape bubble_shape(const CknParams& params, double eps) {
  require_positive_d(params, "bubble");
  if (!(eps > 0.0)) throw InputError("bubble: eps must be positive");
  const auto ex = derive_exponents(params);
  return {*ex.eta, (params.n() - ex.d * params.p()) / (ex.d * params.p())};
}

}  // namespace

double bubble_value(const CknParams& params, double eps, double r) {
  const auto s = bubble_shape(params, eps);
  return std::pow(eps + std::pow(r, s.eta), -s.m);
}

double bubble_derivative(const CknParams& params, double eps, double r) {
  const auto s = bubble_shape(params, eps);
  if (r == 0.0) return s.eta > 1.0 ? 0.0 : (s.eta == 1.0 ? -s.m * std::pow(eps, -s.m - 1.0) : -HUGE_VAL);
  return -s.m * s.eta * std::pow(r, s.eta - 1.0) * std::pow(eps + std::pow(r, s.eta), -s.m - 1.0);
}

double k_eps(const CknParams& params, double eps) {
  const auto s = bubble_shape(params, eps);
  return *derive_exponents(params).c0 * std::pow(eps * hardy_gap(params), s.m);
}

namespace {

// Binomial series coefficients of (1+x)^{-B}.
template <class F>
double binomial_series(double B, F&& term_scale) {
  double coeff = 1.0, sum = 0.0;
  for (int k = 0; k < 2000; ++k) {
    const double t = coeff * term_scale(k);
    sum += t;
    if (std::abs(t) <= 1e-18 * std::abs(sum) && k > 2) break;
    coeff *= (-B - k) / (k + 1.0);
  }
  return sum;
}

// int_{xlo}^{xhi} e^{alpha x} (1 + e^x)^{-B} dx by composite Gauss-Legendre.
double log_panels(double alpha, double B, double xlo, double xhi, int panels) {
  const auto& g = gauss_legendre(16);
  const double w = (xhi - xlo) / panels;
  double sum = 0.0;
  for (int j = 0; j < panels; ++j) {
    const double x0 = xlo + j * w;
    double part = 0.0;
    for (std::size_t i = 0; i < g.points.size(); ++i) {
      const double x = x0 + w * g.points[i];
      part += g.weights[i] * std::exp(alpha * x - B * std::log1p(std::exp(x)));
    }
    sum += w * part;
  }
  return sum;
}

}  // namespace

PowerIntegral power_profile_integral(double A, double eta, double B, double s, const WholeLineOptions& opts) {
  if (!(A > -1.0) || !(eta > 0.0) || !(eta * B > A + 1.0) || !(s > 0.0)) {
    throw InputError("power_profile_integral: need A > -1, eta > 0, eta*B > A+1, scale > 0");
  }
  if (!(opts.r_inf > 10.0 * s)) throw InputError("power_profile_integral: r_inf must exceed 10 * scale");
  if (!(opts.head_rel > 0.0 && opts.head_rel < 1.0)) throw InputError("power_profile_integral: need 0 < head_rel < 1");

  // With t = (r/s)^eta: I = s^{A+1}/eta int_0^inf t^{alpha-1} (1+t)^{-B} dt, alpha = (A+1)/eta.
  // Cutoffs are taken in t so that both series converge quickly for any eta.
  const double alpha = (A + 1.0) / eta;
  const double tlo = std::min(std::pow(opts.head_rel, eta), 1e-3);
  const double thi = std::max(std::pow(opts.r_inf / s, eta), 1e3);

  // (1+t)^{-B} = sum_k c_k t^k on [0, tlo].
  const double head = binomial_series(B, [&](int k) { return std::pow(tlo, alpha + k) / (alpha + k); });
  // (1+t)^{-B} = t^{-B} sum_k c_k t^{-k} on [thi, inf).
  const double tail = binomial_series(B, [&](int k) {
    const double e = B + k - alpha;
    return std::pow(thi, -e) / e;
  });

  const double xlo = std::log(tlo), xhi = std::log(thi);
  const int panels = std::max(8, static_cast<int>(std::ceil((xhi - xlo) / 0.25)));
  const double scale = std::pow(s, A + 1.0) / eta;
  const double coarse = scale * (head + tail + log_panels(alpha, B, xlo, xhi, panels));
  const double fine = scale * (head + tail + log_panels(alpha, B, xlo, xhi, 2 * panels));
  return {fine, std::abs(fine - coarse) / std::abs(fine)};
}

BestConstant s_radial(const CknParams& params, double dilation, const WholeLineOptions& opts) {
  require_positive_d(params, "s_radial");
  const ExtremalProfile U(params, dilation);
  const auto ex = derive_exponents(params);
  const double n = params.n(), p = params.p(), a = params.a(), b = params.b(), q = ex.q;
  const double eta = U.eta(), m = U.shape_exponent(), amp = U.amplitude(), s = dilation;
  const double area = sphere_area(params.n());

  // |U'|^p r^{n-1-ap} = (amp m eta)^p s^{-p eta} r^{n-1-ap+p(eta-1)} (1+(r/s)^eta)^{-p(m+1)}
  const auto grad = power_profile_integral(n - 1.0 - a * p + p * (eta - 1.0), eta, p * (m + 1.0), s, opts);
  // |U|^q r^{n-1-bq} = amp^q r^{n-1-bq} (1+(r/s)^eta)^{-mq}
  const auto qint = power_profile_integral(n - 1.0 - b * q, eta, m * q, s, opts);

  BestConstant out{};
  out.grad_p = area * std::pow(amp * m * eta, p) * std::pow(s, -p * eta) * grad.value;
  out.q_int = area * std::pow(amp, q) * qint.value;
  out.value = out.grad_p / std::pow(out.q_int, p / q);
  out.achieved_tol = std::max(grad.achieved_tol, qint.achieved_tol);
  if (!(out.achieved_tol <= opts.tol) || !std::isfinite(out.value)) {
    std::ostringstream os;
    os << "s_radial: quadrature reached only " << out.achieved_tol << " relative (target " << opts.tol << ")";
    throw ConvergenceError(os.str(), out.achieved_tol);
  }
  return out;
}

}  // namespace cknlab
