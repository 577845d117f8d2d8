#pragma once

#include "mapcalc/manifold.hpp"

#include <array>
#include <vector>

namespace mapcalc {

using MultiIndex = std::vector<int>;

/// All multi-indices alpha in N^dims with |alpha| <= order, sorted by |alpha|
/// and then lexicographically (descending in the first axis).
std::vector<MultiIndex> multi_indices(int dims, int order);

int total_order(const MultiIndex& alpha);
std::string to_string(const MultiIndex& alpha);

namespace fd {

/// Fourth-order accurate central stencil for the `order`-th derivative,
/// order in [0, 4]. Weights for offsets -half_width .. half_width, to be
/// divided by spacing^order.
struct Stencil {
  int half_width = 0;
  std::vector<double> weights;
};

const Stencil& central(int order);

/// Shape of a tensor-product grid: node (i0, i1) has linear index
/// i0 + count[0] * i1.
struct GridShape {
  int dims = 1;
  std::array<int, 2> count{1, 1};
  double spacing = 1.0;
};

/// Derivative along one axis of nodal data (one column per node). Columns
/// whose stencil leaves the grid are set to NaN.
Matrix differentiate(const Matrix& values, const GridShape& shape, int axis,
                     int order);

/// partial^alpha applied axis by axis in `axis_order` (default ascending).
Matrix partial(const Matrix& values, const GridShape& shape,
               const MultiIndex& alpha, std::vector<int> axis_order = {});

}  // namespace fd
}  // namespace mapcalc
