#include "mapcalc/sampled_map.hpp"

#include "mapcalc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mapcalc {

namespace {

fd::GridShape shape_of(const ChartGrid& g) {
  return fd::GridShape{g.dims, g.count, g.spacing};
}

// Lagrange weights of the 4-point stencil at offsets -1, 0, 1, 2 for
// fractional position t in [0, 1].
std::array<double, 4> cubic_weights(double t) {
  return {-t * (t - 1.0) * (t - 2.0) / 6.0, (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0,
          -(t + 1.0) * t * (t - 2.0) / 2.0, (t + 1.0) * t * (t - 1.0) / 6.0};
}

struct AxisStencil {
  int base = 0;       // node position of offset -1
  std::array<double, 4> weights{};
  int exact = -1;     // node position when x sits on a node
};

AxisStencil axis_stencil(const ChartGrid& g, int axis, double x) {
  const auto a = static_cast<std::size_t>(axis);
  double t = x / g.spacing - g.first[a];
  AxisStencil s;
  double nearest = std::round(t);
  if (std::abs(t - nearest) < 1e-9 && nearest >= 0 && nearest < g.count[a]) {
    s.exact = static_cast<int>(nearest);
    return s;
  }
  int i = static_cast<int>(std::floor(t));
  i = std::clamp(i, 1, g.count[a] - 3);
  s.base = i - 1;
  s.weights = cubic_weights(t - i);
  return s;
}

Vector finish_point(const TargetManifold& target, const Vector& v) {
  if (target.is_sphere()) return v * (target.radius() / v.norm());
  return target.reduce(v);
}

// Unwraps torus values relative to a reference so that a stencil never
// straddles a period jump.
Vector unwrap(const TargetManifold& target, const Vector& ref, const Vector& v) {
  if (target.is_torus()) return ref + target.wrap(v - ref);
  return v;
}

}  // namespace

SampledMap::SampledMap(DomainAtlas atlas, TargetManifold target, int resolution,
                       std::vector<Matrix> values)
    : atlas_(std::move(atlas)),
      target_(std::move(target)),
      resolution_(resolution),
      values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != atlas_.chart_count())
    throw InvalidArgument("one value block per chart is required");
  for (int c = 0; c < atlas_.chart_count(); ++c) {
    grids_.push_back(atlas_.grid(c, resolution_));
    const Matrix& v = values_[static_cast<std::size_t>(c)];
    if (v.rows() != target_.ambient_dimension() ||
        v.cols() != grids_.back().node_count())
      throw InvalidArgument("value block has wrong shape for chart " +
                            std::to_string(c));
  }
}

const ChartGrid& SampledMap::grid(int chart_id) const {
  atlas_.chart(chart_id);
  return grids_[static_cast<std::size_t>(chart_id)];
}

const Matrix& SampledMap::chart_values(int chart_id) const {
  atlas_.chart(chart_id);
  return values_[static_cast<std::size_t>(chart_id)];
}

Point SampledMap::value(int chart_id, int node) const {
  return Point{chart_values(chart_id).col(node)};
}

bool SampledMap::operator==(const SampledMap& other) const {
  if (!(atlas_ == other.atlas_) || !(target_ == other.target_) ||
      resolution_ != other.resolution_)
    return false;
  for (std::size_t c = 0; c < values_.size(); ++c) {
    if (values_[c] != other.values_[c]) return false;
  }
  return true;
}

SampledMap build_map(const DomainAtlas& atlas, const TargetManifold& target,
                     int resolution,
                     const std::function<Vector(int, int)>& node_value) {
  std::vector<Matrix> values;
  for (int c = 0; c < atlas.chart_count(); ++c) {
    ChartGrid g = atlas.grid(c, resolution);
    Matrix block(target.ambient_dimension(), g.node_count());
    for (int node = 0; node < g.node_count(); ++node)
      block.col(node) = node_value(c, node);
    values.push_back(std::move(block));
  }
  return SampledMap(atlas, target, resolution, std::move(values));
}

SampledMap sample_map(const DomainAtlas& atlas, const TargetManifold& target,
                      const MapFormula& formula, int resolution) {
  return build_map(atlas, target, resolution, [&](int c, int node) {
    Vector angles = atlas.grid(c, resolution).angles(node);
    Vector v = formula.eval(angles);
    try {
      return target.make_point(v).coords;
    } catch (const InvalidPoint& e) {
      throw FormulaOutOfTarget("formula '" + formula.name +
                               "' left the target: " + e.what());
    }
  });
}

Point interpolate_in_chart(const SampledMap& map, int chart_id, const Vector& x) {
  const ChartGrid& g = map.grid(chart_id);
  const Matrix& values = map.chart_values(chart_id);
  const TargetManifold& target = map.target();
  if (g.dims == 1) {
    AxisStencil s = axis_stencil(g, 0, x[0]);
    if (s.exact >= 0) return Point{values.col(s.exact)};
    Vector ref = values.col(s.base + 1);
    Vector acc = Vector::Zero(values.rows());
    for (int k = 0; k < 4; ++k)
      acc += s.weights[static_cast<std::size_t>(k)] *
             unwrap(target, ref, values.col(s.base + k));
    return Point{finish_point(target, acc)};
  }
  AxisStencil s0 = axis_stencil(g, 0, x[0]);
  AxisStencil s1 = axis_stencil(g, 1, x[1]);
  if (s0.exact >= 0 && s1.exact >= 0)
    return Point{values.col(g.index(s0.exact, s1.exact))};
  auto taps = [](const AxisStencil& s) {
    std::vector<std::pair<int, double>> t;
    if (s.exact >= 0) {
      t.emplace_back(s.exact, 1.0);
    } else {
      for (int k = 0; k < 4; ++k)
        t.emplace_back(s.base + k, s.weights[static_cast<std::size_t>(k)]);
    }
    return t;
  };
  auto t0 = taps(s0), t1 = taps(s1);
  Vector ref = values.col(g.index(t0[t0.size() / 2].first, t1[t1.size() / 2].first));
  Vector acc = Vector::Zero(values.rows());
  for (auto [i1, w1] : t1)
    for (auto [i0, w0] : t0)
      acc += (w0 * w1) * unwrap(target, ref, values.col(g.index(i0, i1)));
  return Point{finish_point(target, acc)};
}

Point interpolate(const SampledMap& map, const Vector& angles) {
  int c = map.atlas().chart_with_compact(angles);
  if (c < 0) throw InvalidArgument("point not covered by the compact cover");
  const Chart& chart = map.atlas().chart(c);
  auto x = map.atlas().to_chart(c, angles, &chart.compact, 1e-9);
  return interpolate_in_chart(map, c, *x);
}

double overlap_residual(const SampledMap& map) {
  const DomainAtlas& atlas = map.atlas();
  double worst = 0.0;
  for (int a = 0; a < atlas.chart_count(); ++a) {
    const ChartGrid& ga = map.grid(a);
    // Interpolable region of a chart: one node in from each grid edge.
    auto interior = [&](int c) {
      const ChartGrid& g = map.grid(c);
      Box b{Vector(g.dims), Vector(g.dims)};
      for (int d = 0; d < g.dims; ++d) {
        const auto dd = static_cast<std::size_t>(d);
        b.lower[d] = (g.first[dd] + 1) * g.spacing;
        b.upper[d] = (g.first[dd] + g.count[dd] - 2) * g.spacing;
      }
      return b;
    };
    Box box_a = interior(a);
    for (int b = a + 1; b < atlas.chart_count(); ++b) {
      Box box_b = interior(b);
      for (int node = 0; node < ga.node_count(); ++node) {
        for (int half = 0; half < 2; ++half) {
          Vector xa = ga.coordinate(node);
          xa[0] += 0.5 * half * ga.spacing;
          if (!box_a.contains(xa)) continue;
          Vector angles = reduce_angles(xa);
          auto xb = atlas.to_chart(b, angles, &box_b);
          if (!xb) continue;
          Point pa = interpolate_in_chart(map, a, xa);
          Point pb = interpolate_in_chart(map, b, *xb);
          worst = std::max(worst, distance(map.target(), pa, pb));
        }
      }
    }
  }
  return worst;
}

const Matrix& JetTable::entry(const MultiIndex& alpha) const {
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] == alpha) return entries[i];
  }
  throw InvalidArgument("jet table has no entry " + to_string(alpha));
}

JetTable chart_jet(const SampledMap& map, const TargetChart& target_chart,
                   int chart_id, int order, const Box* compact) {
  if (order < 0 || order > 4)
    throw InvalidArgument("jet order must lie in [0, 4]");
  const ChartGrid& g = map.grid(chart_id);
  const Box& box = compact ? *compact : map.atlas().chart(chart_id).compact;
  const Matrix& values = map.chart_values(chart_id);

  JetTable jet;
  jet.chart_id = chart_id;
  jet.order = order;
  jet.nodes = g.nodes_in(box);
  for (int node : jet.nodes) {
    if (!target_chart.contains(Point{values.col(node)}))
      throw TargetChartViolated("value at chart " + std::to_string(chart_id) +
                                " node " + std::to_string(node) +
                                " leaves the target chart");
  }

  Matrix local(map.target().dimension(), g.node_count());
  for (int node = 0; node < g.node_count(); ++node)
    local.col(node) = target_chart.coordinates(Point{values.col(node)});

  jet.indices = multi_indices(g.dims, order);
  for (const MultiIndex& alpha : jet.indices) {
    Matrix full = fd::partial(local, shape_of(g), alpha);
    Matrix restricted(full.rows(), static_cast<Eigen::Index>(jet.nodes.size()));
    for (std::size_t i = 0; i < jet.nodes.size(); ++i)
      restricted.col(static_cast<Eigen::Index>(i)) = full.col(jet.nodes[i]);
    if (!restricted.allFinite())
      throw InsufficientResolution("stencil for " + to_string(alpha) +
                                   " does not fit at resolution " +
                                   std::to_string(map.resolution()));
    jet.entries.push_back(std::move(restricted));
  }
  return jet;
}

std::vector<TargetChart> adapted_target_charts(const SampledMap& f,
                                               bool require_containment) {
  std::vector<TargetChart> charts;
  const TargetManifold& target = f.target();
  for (int c = 0; c < f.atlas().chart_count(); ++c) {
    const Chart& chart = f.atlas().chart(c);
    const ChartGrid& g = f.grid(c);
    Vector mid = 0.5 * (chart.compact.lower + chart.compact.upper);
    std::array<int, 2> ij{0, 0};
    for (int d = 0; d < g.dims; ++d) {
      const auto dd = static_cast<std::size_t>(d);
      ij[dd] = static_cast<int>(std::lround(mid[d] / g.spacing)) - g.first[dd];
    }
    Point center = f.value(c, g.index(ij[0], ij[1]));
    TargetChart tc = [&] {
      if (target.is_sphere())
        return TargetChart::sphere_cap(target, center, 0.75 * std::numbers::pi);
      Vector half(target.dimension());
      for (int d = 0; d < target.dimension(); ++d)
        half[d] = 0.45 * target.periods()[static_cast<std::size_t>(d)];
      return TargetChart::torus_box(target, center, half);
    }();
    if (require_containment) {
      for (int node : g.nodes_in(chart.compact)) {
        if (!tc.contains(f.value(c, node)))
          throw TargetChartViolated("f(K_" + std::to_string(c) +
                                    ") does not fit in one target chart");
      }
    }
    charts.push_back(std::move(tc));
  }
  return charts;
}

}  // namespace mapcalc
