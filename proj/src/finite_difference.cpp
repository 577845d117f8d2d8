#include "mapcalc/finite_difference.hpp"

#include "mapcalc/errors.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace mapcalc {

std::vector<MultiIndex> multi_indices(int dims, int order) {
  std::vector<MultiIndex> out;
  for (int total = 0; total <= order; ++total) {
    if (dims == 1) {
      out.push_back({total});
    } else {
      for (int a = total; a >= 0; --a) out.push_back({a, total - a});
    }
  }
  return out;
}

int total_order(const MultiIndex& alpha) {
  return std::accumulate(alpha.begin(), alpha.end(), 0);
}

std::string to_string(const MultiIndex& alpha) {
  std::string s = "(";
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(alpha[i]);
  }
  return s + ")";
}

namespace fd {

const Stencil& central(int order) {
  static const std::array<Stencil, 5> stencils = {{
      {0, {1.0}},
      {2, {1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12}},
      {2, {-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12}},
      {3, {1.0 / 8, -8.0 / 8, 13.0 / 8, 0.0, -13.0 / 8, 8.0 / 8, -1.0 / 8}},
      {3, {-1.0 / 6, 12.0 / 6, -39.0 / 6, 56.0 / 6, -39.0 / 6, 12.0 / 6, -1.0 / 6}},
  }};
  if (order < 0 || order > 4)
    throw InvalidArgument("derivative order must lie in [0, 4]");
  return stencils[static_cast<std::size_t>(order)];
}

Matrix differentiate(const Matrix& values, const GridShape& shape, int axis,
                     int order) {
  if (order == 0) return values;
  const Stencil& st = central(order);
  const double scale = 1.0 / std::pow(shape.spacing, order);
  const int n0 = shape.count[0];
  const int n1 = shape.dims == 2 ? shape.count[1] : 1;
  const int stride = axis == 0 ? 1 : n0;
  const int len = shape.count[static_cast<std::size_t>(axis)];
  Matrix out(values.rows(), values.cols());
  for (int i1 = 0; i1 < n1; ++i1) {
    for (int i0 = 0; i0 < n0; ++i0) {
      const int node = i0 + n0 * i1;
      const int pos = axis == 0 ? i0 : i1;
      if (pos < st.half_width || pos >= len - st.half_width) {
        out.col(node).setConstant(std::numeric_limits<double>::quiet_NaN());
        continue;
      }
      Vector acc = Vector::Zero(values.rows());
      for (int o = -st.half_width; o <= st.half_width; ++o) {
        double w = st.weights[static_cast<std::size_t>(o + st.half_width)];
        if (w != 0.0) acc += w * values.col(node + o * stride);
      }
      out.col(node) = scale * acc;
    }
  }
  return out;
}

Matrix partial(const Matrix& values, const GridShape& shape,
               const MultiIndex& alpha, std::vector<int> axis_order) {
  if (axis_order.empty()) {
    axis_order.resize(alpha.size());
    std::iota(axis_order.begin(), axis_order.end(), 0);
  }
  Matrix out = values;
  for (int axis : axis_order) {
    int order = alpha[static_cast<std::size_t>(axis)];
    if (order > 0) out = differentiate(out, shape, axis, order);
  }
  return out;
}

}  // namespace fd
}  // namespace mapcalc
