#include "mapcalc/local_function.hpp"

#include "mapcalc/errors.hpp"

#include <algorithm>

namespace mapcalc {

LocalFunction::LocalFunction(LocalGrid grid, Matrix values)
    : grid_(grid), values_(std::move(values)) {
  if (!(grid_.upper > grid_.lower) || grid_.intervals < 1 || grid_.margin < 3)
    throw InvalidArgument("local grid needs lower < upper, intervals >= 1, margin >= 3");
  if (values_.cols() != grid_.node_count())
    throw InvalidArgument("local function has wrong number of samples");
}

LocalFunction LocalFunction::sample(const LocalGrid& grid, int dim,
                                    const std::function<Vector(double)>& fn) {
  Matrix values(dim, grid.node_count());
  for (int i = 0; i < grid.node_count(); ++i) values.col(i) = fn(grid.x(i));
  return LocalFunction(grid, std::move(values));
}

LocalFunction LocalFunction::sample_scalar(const LocalGrid& grid,
                                           const std::function<double(double)>& fn) {
  return sample(grid, 1, [&](double x) {
    Vector v(1);
    v[0] = fn(x);
    return v;
  });
}

Matrix LocalFunction::derivative(int order) const {
  fd::GridShape shape{1, {grid_.node_count(), 1}, grid_.spacing()};
  Matrix full = fd::differentiate(values_, shape, 0, order);
  return full.middleCols(grid_.first_interior(), grid_.intervals + 1);
}

LocalFunction LocalFunction::operator+(const LocalFunction& o) const {
  if (!(grid_ == o.grid_) || dim() != o.dim())
    throw InvalidArgument("local functions live on different grids");
  return LocalFunction(grid_, values_ + o.values_);
}

LocalFunction LocalFunction::operator-(const LocalFunction& o) const {
  return *this + o * -1.0;
}

LocalFunction LocalFunction::operator*(double a) const {
  return LocalFunction(grid_, a * values_);
}

double cr_norm(const LocalFunction& f, int r) {
  double sup = 0.0;
  for (int j = 0; j <= r; ++j)
    sup = std::max(sup, f.derivative(j).colwise().norm().maxCoeff());
  return sup;
}

}  // namespace mapcalc
