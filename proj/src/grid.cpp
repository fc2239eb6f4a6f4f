#include "cknlab/grid.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "cknlab/errors.hpp"
#include "cknlab/extremal.hpp"

namespace cknlab {

std::shared_ptr<const RadialGrid> RadialGrid::build(int dimension, double radius, int node_count, double ratio) {
  if (dimension < 2) throw InputError("build_grid: dimension must be >= 2");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InputError("build_grid: radius must be positive");
  if (node_count < 16) throw InputError("build_grid: node_count must be >= 16");
  if (!(ratio > 1.0) || !std::isfinite(ratio)) throw InputError("build_grid: ratio must exceed 1");
  std::shared_ptr<RadialGrid> g(new RadialGrid());
  g->dimension_ = dimension;
  g->radius_ = radius;
  g->ratio_ = ratio;
  g->sphere_area_ = cknlab::sphere_area(dimension);
  const int M = node_count - 1;
  g->nodes_.resize(node_count);
  g->nodes_[0] = 0.0;
  const double log_ratio = std::log(ratio);
  for (int i = 1; i < M; ++i) g->nodes_[i] = radius * std::exp(log_ratio * (i - M));
  g->nodes_[M] = radius;
  if (!(g->nodes_[1] > 0.0)) throw InputError("build_grid: first node underflows; reduce ratio or count");
  return g;
}

double RadialGrid::default_ratio(int node_count) { return std::pow(10.0, 12.0 / (node_count - 1)); }

std::shared_ptr<const RadialGrid> RadialGrid::make_default(int dimension, double radius, int node_count) {
  return build(dimension, radius, node_count, default_ratio(node_count));
}

RadialField::RadialField(GridPtr grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw InputError("RadialField: null grid");
  if (values_.size() != grid_->size()) throw InputError("RadialField: value count does not match grid");
  for (double v : values_) {
    if (!std::isfinite(v)) throw InputError("RadialField: non-finite value");
  }
}

RadialField RadialField::zeros(GridPtr grid) {
  const auto n = grid->size();
  return RadialField(std::move(grid), std::vector<double>(n, 0.0));
}

RadialField RadialField::sample(GridPtr grid, const std::function<double(double)>& f) {
  std::vector<double> v(grid->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f((*grid)[i]);
  return RadialField(std::move(grid), std::move(v));
}

double RadialField::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

RadialField RadialField::scaled(double t) const {
  auto v = values_;
  for (double& x : v) x *= t;
  return RadialField(grid_, std::move(v));
}

void write_csv(std::ostream& os, const RadialField& field) {
  os << "r,u\n";
  char buf[64];
  for (std::size_t i = 0; i < field.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,", field.grid()[i]);
    os << buf;
    std::snprintf(buf, sizeof buf, "%.17g\n", field[i]);
    os << buf;
  }
}

}  // namespace cknlab
