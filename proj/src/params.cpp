#include "cknlab/params.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace cknlab {

const char* to_string(Constraint c) {
  switch (c) {
    case Constraint::dimension: return "dimension";
    case Constraint::p_range: return "p_range";
    case Constraint::a_range: return "a_range";
    case Constraint::b_range: return "b_range";
    case Constraint::c_positive: return "c_positive";
  }
  return "unknown";
}

namespace {

std::string fmt_num(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

}  // namespace

CknParams validate_params(double n, double p, double a, double b, double c) {
  if (!std::isfinite(n) || n != std::floor(n) || n < 2) {
    throw ParameterError(Constraint::dimension,
                         "dimension n must be an integer >= 2 (got " + fmt_num(n) + ")");
  }
  for (double v : {p, a, b, c}) {
    if (!std::isfinite(v)) throw InputError("parameters must be finite");
  }
  if (!(p > 1.0 && p < n)) {
    throw ParameterError(Constraint::p_range,
                         "p-range violated: need 1 < p < n (p=" + fmt_num(p) + ", n=" + fmt_num(n) + ")");
  }
  const double a_max = (n - p) / p;
  if (!(a < a_max)) {
    throw ParameterError(Constraint::a_range, "a-range violated: need a < (n-p)/p = " + fmt_num(a_max) +
                                                  " (a=" + fmt_num(a) + ")");
  }
  if (!(a <= b && b <= a + 1.0)) {
    throw ParameterError(Constraint::b_range, "b-range violated: need a <= b <= a+1 (a=" + fmt_num(a) +
                                                  ", b=" + fmt_num(b) + ")");
  }
  if (!(c > 0.0)) {
    throw ParameterError(Constraint::c_positive, "c-positivity violated: need c > 0 (c=" + fmt_num(c) + ")");
  }
  return CknParams(static_cast<int>(n), p, a, b, c);
}

CknParams CknParams::with_c(double c) const { return validate_params(n_, p_, a_, b_, c); }

DerivedExponents derive_exponents(const CknParams& prm) {
  const double n = prm.n(), p = prm.p();
  const double d = prm.d();
  const double N = hardy_gap(prm);
  DerivedExponents ex{};
  ex.d = d;
  ex.q = n * p / (n - d * p);
  ex.cstar = N / (p - 1.0);
  ex.gap_coeff = d / n;
  if (d > 0.0) {
    ex.eta = d * p * N / ((p - 1.0) * (n - d * p));
    ex.c0 = std::pow(n / (std::pow(p - 1.0, p - 1.0) * (n - d * p)), (n - d * p) / (d * p * p));
    ex.nehari_exp = n / (d * p);
  }
  return ex;
}

void require_positive_d(const CknParams& prm, const char* what) {
  if (prm.hardy_endpoint()) {
    throw UnsupportedError(std::string(what) + ": unsupported at the Hardy endpoint d = 0 (b = a+1)");
  }
}

}  // namespace cknlab
