#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

namespace cknlab {

/// Geometric radial mesh on [0, R]: r_0 = 0 and r_i = R * ratio^{i-M} for
/// i = 1..M, where M = node_count - 1. Immutable after construction.
class RadialGrid {
 public:
  static std::shared_ptr<const RadialGrid> build(int dimension, double radius, int node_count, double ratio);
  /// node_count nodes with ratio 10^{12/(node_count-1)}, so r_1 ~ 1e-12 R.
  static std::shared_ptr<const RadialGrid> make_default(int dimension, double radius = 1.0,
                                                        int node_count = 4096);
  static double default_ratio(int node_count);

  int dimension() const noexcept { return dimension_; }
  double radius() const noexcept { return radius_; }
  double ratio() const noexcept { return ratio_; }
  double sphere_area() const noexcept { return sphere_area_; }

  std::size_t size() const noexcept { return nodes_.size(); }
  std::size_t cells() const noexcept { return nodes_.size() - 1; }
  std::span<const double> nodes() const noexcept { return nodes_; }
  double operator[](std::size_t i) const noexcept { return nodes_[i]; }
  double width(std::size_t cell) const noexcept { return nodes_[cell + 1] - nodes_[cell]; }
  double max_width() const noexcept { return nodes_.back() - nodes_[nodes_.size() - 2]; }

 private:
  RadialGrid() = default;
  int dimension_ = 0;
  double radius_ = 0, ratio_ = 0, sphere_area_ = 0;
  std::vector<double> nodes_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// Piecewise-linear radial function given by its nodal values.
class RadialField {
 public:
  RadialField(GridPtr grid, std::vector<double> values);
  static RadialField zeros(GridPtr grid);
  static RadialField sample(GridPtr grid, const std::function<double(double)>& f);

  const RadialGrid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::vector<double>& mutable_values() noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }

  /// Slope on cell i.
  double slope(std::size_t cell) const noexcept {
    return (values_[cell + 1] - values_[cell]) / grid_->width(cell);
  }
  bool is_dirichlet() const noexcept { return values_.back() == 0.0; }
  double max_abs() const noexcept;

  RadialField scaled(double t) const;

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

/// CSV with header "r,u", one row per node, 17 significant digits.
void write_csv(std::ostream& os, const RadialField& field);

}  // namespace cknlab
