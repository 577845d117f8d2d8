#pragma once

#include "mapcalc/finite_difference.hpp"

#include <functional>

namespace mapcalc {

/// Uniform grid on the closed interval [lower, upper] (the closure of an
/// open bounded U subset R) padded by `margin` nodes on each side so that
/// fourth-order stencils up to order 4 fit at the boundary.
struct LocalGrid {
  double lower = 0.0;
  double upper = 1.0;
  int intervals = 256;
  int margin = 3;

  double spacing() const { return (upper - lower) / intervals; }
  int node_count() const { return intervals + 1 + 2 * margin; }
  double x(int node) const { return lower + (node - margin) * spacing(); }
  /// Nodes of the closed interval itself.
  int first_interior() const { return margin; }
  int last_interior() const { return margin + intervals; }

  bool operator==(const LocalGrid&) const = default;
};

/// A chart-local function U -> R^dim sampled on a LocalGrid.
class LocalFunction {
 public:
  LocalFunction(LocalGrid grid, Matrix values);

  static LocalFunction sample(const LocalGrid& grid, int dim,
                              const std::function<Vector(double)>& fn);
  static LocalFunction sample_scalar(const LocalGrid& grid,
                                     const std::function<double(double)>& fn);

  const LocalGrid& grid() const noexcept { return grid_; }
  const Matrix& values() const noexcept { return values_; }
  int dim() const noexcept { return static_cast<int>(values_.rows()); }

  /// d^order/dx^order on the interior nodes (one column per interior node).
  Matrix derivative(int order) const;

  LocalFunction operator+(const LocalFunction& o) const;
  LocalFunction operator-(const LocalFunction& o) const;
  LocalFunction operator*(double a) const;

 private:
  LocalGrid grid_;
  Matrix values_;
};

/// max_{j <= r} sup over the nodes of the closed interval of |d^j f|.
double cr_norm(const LocalFunction& f, int r);

}  // namespace mapcalc
