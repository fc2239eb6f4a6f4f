#include "cknlab/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "cknlab/errors.hpp"
#include "cknlab/gauss.hpp"

namespace cknlab {

namespace {

// (e^x - 1)/x
double expm1_ratio(double x) { return x == 0.0 ? 1.0 : std::expm1(x) / x; }

// expm1_ratio(x) - expm1_ratio(y) without cancellation when x ~ y are small.
double expm1_ratio_diff(double x, double y) {
  if (std::max(std::abs(x), std::abs(y)) > 0.5) return expm1_ratio(x) - expm1_ratio(y);
  // sum_{j>=1} (x^j - y^j) / (j+1)!
  double diff = x - y;  // x^j - y^j
  double ypow = 1.0;    // y^{j-1}
  double fact = 2.0;    // (j+1)!
  double sum = 0.0;
  for (int j = 1; j < 30; ++j) {
    sum += diff / fact;
    ypow *= y;
    diff = x * diff + ypow * (x - y);
    fact *= (j + 2);
  }
  return sum;
}

struct Moment {
  double w0, w1;
};

// Moments of r^k on [r0, r1] against 1 and (r - r0)/(r1 - r0).
Moment cell_moment(double r0, double r1, double k) {
  if (r1 <= r0) return {0.0, 0.0};
  if (r0 == 0.0) {
    const double base = std::pow(r1, k + 1.0);
    return {base / (k + 1.0), base / (k + 2.0)};
  }
  const double L = std::log(r1 / r0);
  const double base = std::pow(r0, k + 1.0) * L;
  const double w0 = base * expm1_ratio((k + 1.0) * L);
  const double w1 = base * expm1_ratio_diff((k + 2.0) * L, (k + 1.0) * L) / std::expm1(L);
  return {w0, w1};
}

void check_exponent(double k) {
  if (!(k > -1.0)) throw InputError("weighted quadrature: weight r^k with k <= -1 is not integrable at 0");
}

}  // namespace

CellMoments cell_moments(const RadialGrid& grid, double k) {
  check_exponent(k);
  CellMoments m{k, std::vector<double>(grid.cells()), std::vector<double>(grid.cells())};
  for (std::size_t i = 0; i < grid.cells(); ++i) {
    const auto c = cell_moment(grid[i], grid[i + 1], k);
    m.w0[i] = c.w0;
    m.w1[i] = c.w1;
  }
  return m;
}

std::vector<double> hat_weights(const CellMoments& m) {
  std::vector<double> w(m.w0.size() + 1, 0.0);
  for (std::size_t i = 0; i < m.w0.size(); ++i) {
    w[i] += m.w0[i] - m.w1[i];
    w[i + 1] += m.w1[i];
  }
  return w;
}

double weighted_integral(const RadialField& field, double alpha, double s) {
  return weighted_integral_ball(field, alpha, s, field.grid().radius());
}

double weighted_integral_ball(const RadialField& field, double alpha, double s, double rmax) {
  const auto& g = field.grid();
  const double k = g.dimension() - 1.0 - alpha;
  check_exponent(k);
  auto phi = [&](std::size_t i) { return std::pow(std::abs(field[i]), s); };
  double sum = 0.0;
  for (std::size_t i = 0; i < g.cells(); ++i) {
    if (g[i] >= rmax) break;
    if (g[i + 1] <= rmax) {
      const auto c = cell_moment(g[i], g[i + 1], k);
      sum += phi(i) * (c.w0 - c.w1) + phi(i + 1) * c.w1;
    } else {
      // Partial cell: integrate the same linear interpolant of |u|^s up to rmax.
      const double t = (rmax - g[i]) / g.width(i);
      const double f_end = phi(i) + t * (phi(i + 1) - phi(i));
      const auto c = cell_moment(g[i], rmax, k);
      sum += phi(i) * (c.w0 - c.w1) + f_end * c.w1;
    }
  }
  return g.sphere_area() * sum;
}

namespace {

double lagrange(const double* x, const double* f, int cnt, double r) {
  double sum = 0.0;
  for (int a = 0; a < cnt; ++a) {
    double l = 1.0;
    for (int b = 0; b < cnt; ++b) {
      if (b != a) l *= (r - x[b]) / (x[a] - x[b]);
    }
    sum += f[a] * l;
  }
  return sum;
}

// int_0^{r1} r^k P(r) dr for the quadratic through (x[0..2], f[0..2]),
// x[0] = 0, by exact monomial moments.
double first_cell_quadratic(const double* x, const double* f, double k) {
  const double r1 = x[1];
  double c[3] = {0.0, 0.0, 0.0};  // P = c0 + c1 r + c2 r^2
  for (int a = 0; a < 3; ++a) {
    const int b = (a + 1) % 3, d = (a + 2) % 3;
    const double den = (x[a] - x[b]) * (x[a] - x[d]);
    c[2] += f[a] / den;
    c[1] -= f[a] * (x[b] + x[d]) / den;
    c[0] += f[a] * x[b] * x[d] / den;
  }
  double sum = 0.0;
  for (int j = 0; j < 3; ++j) sum += c[j] * std::pow(r1, k + j + 1.0) / (k + j + 1.0);
  return sum;
}

}  // namespace

double integrate_nodal(const RadialGrid& grid, std::span<const double> phi, double k, NodalRule rule) {
  check_exponent(k);
  if (phi.size() != grid.size()) throw InputError("integrate_nodal: sample count does not match grid");
  double sum = 0.0;
  if (rule == NodalRule::linear) {
    for (std::size_t i = 0; i < grid.cells(); ++i) {
      const auto c = cell_moment(grid[i], grid[i + 1], k);
      sum += phi[i] * (c.w0 - c.w1) + phi[i + 1] * c.w1;
    }
    return sum;
  }
  const auto& gl = gauss_legendre(8);
  const std::size_t M = grid.cells();
  for (std::size_t i = 0; i < M; ++i) {
    if (i == 0) {
      const double x[3] = {grid[0], grid[1], grid[2]};
      const double f[3] = {phi[0], phi[1], phi[2]};
      sum += first_cell_quadratic(x, f, k);
      continue;
    }
    const double r0 = grid[i], h = grid.width(i);
    double cell = 0.0;
    int stencils = 0;
    for (std::size_t start : {i - 1, i}) {
      if (start + 2 > M) continue;
      const double x[3] = {grid[start], grid[start + 1], grid[start + 2]};
      const double f[3] = {phi[start], phi[start + 1], phi[start + 2]};
      double part = 0.0;
      for (std::size_t g = 0; g < gl.points.size(); ++g) {
        const double r = r0 + h * gl.points[g];
        part += gl.weights[g] * std::pow(r, k) * lagrange(x, f, 3, r);
      }
      cell += h * part;
      ++stencils;
    }
    sum += cell / stencils;
  }
  return sum;
}

double integrate_function(const RadialGrid& grid, const std::function<double(double)>& f, double alpha,
                          std::span<const double> breaks, double rmax) {
  const double k = grid.dimension() - 1.0 - alpha;
  check_exponent(k);
  if (rmax < 0.0) rmax = grid.radius();
  const auto& gl = gauss_legendre(8);
  auto gauss_piece = [&](double lo, double hi) {
    double part = 0.0;
    for (std::size_t g = 0; g < gl.points.size(); ++g) {
      const double r = lo + (hi - lo) * gl.points[g];
      part += gl.weights[g] * std::pow(r, k) * f(r);
    }
    return (hi - lo) * part;
  };
  double sum = 0.0;
  {
    // First cell: r = r_1 t^{1/(k+1)}, dr r^k = r_1^{k+1}/(k+1) dt.
    const double r1 = std::min(grid[1], rmax);
    double part = 0.0;
    for (std::size_t g = 0; g < gl.points.size(); ++g) {
      part += gl.weights[g] * f(r1 * std::pow(gl.points[g], 1.0 / (k + 1.0)));
    }
    sum += std::pow(r1, k + 1.0) / (k + 1.0) * part;
  }
  for (std::size_t i = 1; i < grid.cells(); ++i) {
    double lo = grid[i];
    const double hi = std::min(grid[i + 1], rmax);
    if (lo >= hi) break;
    for (double br : breaks) {
      if (br > lo && br < hi) {
        sum += gauss_piece(lo, br);
        lo = br;
      }
    }
    sum += gauss_piece(lo, hi);
  }
  return grid.sphere_area() * sum;
}

}  // namespace cknlab
