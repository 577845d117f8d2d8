#pragma once

#include "mapcalc/atlas.hpp"
#include "mapcalc/finite_difference.hpp"
#include "mapcalc/manifold.hpp"
#include "mapcalc/target_chart.hpp"

#include <functional>
#include <string>
#include <vector>

namespace mapcalc {

/// Closed-form map M -> N given on domain angles. `eval` returns ambient
/// coordinates (sphere) or unreduced coordinates (torus).
struct MapFormula {
  std::string name;
  json descriptor;
  std::function<Vector(const Vector& angles)> eval;
};

/// A map M -> N sampled on the uniform grid of every chart's enlarged
/// domain. Immutable after construction.
class SampledMap {
 public:
  /// `values[i]` holds one column of ambient coordinates per node of chart
  /// i. Validates shapes and the Point invariants.
  SampledMap(DomainAtlas atlas, TargetManifold target, int resolution,
             std::vector<Matrix> values);

  const DomainAtlas& atlas() const noexcept { return atlas_; }
  const TargetManifold& target() const noexcept { return target_; }
  int resolution() const noexcept { return resolution_; }

  const ChartGrid& grid(int chart_id) const;
  const Matrix& chart_values(int chart_id) const;
  Point value(int chart_id, int node) const;

  /// Exact equality of all data.
  bool operator==(const SampledMap& other) const;

 private:
  DomainAtlas atlas_;
  TargetManifold target_;
  int resolution_;
  std::vector<ChartGrid> grids_;
  std::vector<Matrix> values_;
};

/// Builds a map by evaluating `node_value(chart, node)` on every grid node.
SampledMap build_map(const DomainAtlas& atlas, const TargetManifold& target,
                     int resolution,
                     const std::function<Vector(int chart, int node)>& node_value);

/// Samples a closed-form map. Throws FormulaOutOfTarget when the formula
/// produces something that is not a point of the target.
SampledMap sample_map(const DomainAtlas& atlas, const TargetManifold& target,
                      const MapFormula& formula, int resolution);

/// Cubic (tensor Lagrange) interpolation of the map in chart coordinates at
/// the domain point `angles`. Uses the first chart whose K_i contains it.
Point interpolate(const SampledMap& map, const Vector& angles);
/// Same, inside a given chart at chart coordinates `x`.
Point interpolate_in_chart(const SampledMap& map, int chart_id, const Vector& x);

/// Max over shared samples (nodes and cell midpoints) of the target distance
/// between the interpolants of two overlapping charts.
double overlap_residual(const SampledMap& map);

/// Chart-local partial derivatives d^alpha (psi o g o phi^-1) on the nodes
/// of a compact box (default K_i), |alpha| <= order.
struct JetTable {
  int chart_id = 0;
  int order = 0;
  std::vector<int> nodes;
  std::vector<MultiIndex> indices;
  std::vector<Matrix> entries;  // one column per node in `nodes`

  const Matrix& entry(const MultiIndex& alpha) const;
};

/// Fourth-order central differences on the enlarged grid, restricted to the
/// nodes of `compact` (default K_i). Throws TargetChartViolated when a
/// value over the compact set leaves the target chart, and
/// InsufficientResolution when the stencil does not fit.
JetTable chart_jet(const SampledMap& map, const TargetChart& target_chart,
                   int chart_id, int order, const Box* compact = nullptr);

/// One target chart per domain chart, centred at the image of the centre of
/// K_i: a cap of angle 3 pi / 4 on the sphere, a box of half-width 0.45 of
/// the period on the torus. With `require_containment`, throws
/// TargetChartViolated unless f(K_i) lies in the chart.
std::vector<TargetChart> adapted_target_charts(const SampledMap& f,
                                               bool require_containment = true);

}  // namespace mapcalc
