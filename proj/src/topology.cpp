#include "mapcalc/topology.hpp"

#include "mapcalc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mapcalc {

namespace {

void require_compatible(const SampledMap& f, const SampledMap& g) {
  if (!(f.atlas() == g.atlas()) || f.resolution() != g.resolution() ||
      !(f.target() == g.target()))
    throw ResolutionMismatch("maps differ in atlas, resolution or target");
}

double max_jet_difference(const JetTable& a, const JetTable& b) {
  double sup = 0.0;
  for (std::size_t i = 0; i < a.entries.size(); ++i)
    sup = std::max(sup, (a.entries[i] - b.entries[i]).colwise().norm().maxCoeff());
  return sup;
}

}  // namespace

CkNeighborhood::CkNeighborhood(SampledMap center,
                               std::vector<NeighborhoodElement> elements,
                               double epsilon, int order)
    : center_(std::move(center)),
      elements_(std::move(elements)),
      epsilon_(epsilon),
      order_(order) {
  if (!(epsilon_ > 0.0)) throw InvalidArgument("epsilon must be positive");
  if (order_ < 0 || order_ > 4) throw InvalidArgument("order must lie in [0, 4]");
  for (const NeighborhoodElement& e : elements_) {
    const ChartGrid& g = center_.grid(e.chart_id);
    for (int node : g.nodes_in(e.compact)) {
      if (!e.target_chart.contains(center_.value(e.chart_id, node)))
        throw TargetChartViolated("f(K) is not contained in V");
    }
  }
}

CkNeighborhood CkNeighborhood::over_cover(const SampledMap& center,
                                          double epsilon, int order) {
  std::vector<TargetChart> charts = adapted_target_charts(center);
  std::vector<NeighborhoodElement> elements;
  for (int c = 0; c < center.atlas().chart_count(); ++c)
    elements.push_back({c, charts[static_cast<std::size_t>(c)],
                        center.atlas().chart(c).compact});
  return CkNeighborhood(center, std::move(elements), epsilon, order);
}

double jet_sup_difference(const SampledMap& f, const SampledMap& g,
                          const NeighborhoodElement& element, int order) {
  require_compatible(f, g);
  JetTable jf = chart_jet(f, element.target_chart, element.chart_id, order, &element.compact);
  JetTable jg = chart_jet(g, element.target_chart, element.chart_id, order, &element.compact);
  return max_jet_difference(jf, jg);
}

bool nbhd_contains(const CkNeighborhood& nbhd, const SampledMap& g) {
  require_compatible(nbhd.center(), g);
  for (const NeighborhoodElement& e : nbhd.elements()) {
    const ChartGrid& grid = g.grid(e.chart_id);
    for (int node : grid.nodes_in(e.compact)) {
      if (!e.target_chart.contains(g.value(e.chart_id, node))) return false;
    }
    if (!(jet_sup_difference(nbhd.center(), g, e, nbhd.order()) < nbhd.epsilon()))
      return false;
  }
  return true;
}

double ck_distance(const SampledMap& f, const SampledMap& g, int order) {
  require_compatible(f, g);
  return ck_distance(adapted_target_charts(f), f, g, order);
}

double ck_distance(const std::vector<TargetChart>& charts, const SampledMap& g,
                   const SampledMap& h, int order) {
  require_compatible(g, h);
  if (static_cast<int>(charts.size()) != g.atlas().chart_count())
    throw InvalidArgument("one target chart per domain chart is required");
  double sup = 0.0;
  for (int c = 0; c < g.atlas().chart_count(); ++c) {
    const TargetChart& tc = charts[static_cast<std::size_t>(c)];
    JetTable jg = chart_jet(g, tc, c, order);
    JetTable jh = chart_jet(h, tc, c, order);
    sup = std::max(sup, max_jet_difference(jg, jh));
  }
  return sup;
}

json SectionNormReport::to_json() const {
  json j;
  j["total"] = total;
  j["entries"] = json::array();
  for (const Entry& e : entries)
    j["entries"].push_back({{"chart_id", e.chart_id}, {"alpha", e.alpha}, {"sup", e.sup}});
  return j;
}

SectionNormReport section_norm(const PullbackSection& s, int order) {
  const SampledMap& f = s.base_map();
  std::vector<TargetChart> charts = adapted_target_charts(f, false);
  SectionNormReport report;
  for (int c = 0; c < f.atlas().chart_count(); ++c) {
    const ChartGrid& g = f.grid(c);
    const TargetChart& tc = charts[static_cast<std::size_t>(c)];
    Matrix components(f.target().dimension(), g.node_count());
    const Matrix& vectors = s.chart_vectors(c);
    for (int node = 0; node < g.node_count(); ++node)
      components.col(node) = tc.trivialize(f.value(c, node), vectors.col(node));
    std::vector<int> nodes = g.nodes_in(f.atlas().chart(c).compact);
    fd::GridShape shape{g.dims, g.count, g.spacing};
    for (const MultiIndex& alpha : multi_indices(g.dims, order)) {
      Matrix d = fd::partial(components, shape, alpha);
      double sup = 0.0;
      for (int node : nodes) {
        double v = d.col(node).norm();
        if (!std::isfinite(v))
          throw InsufficientResolution("section norm stencil does not fit");
        sup = std::max(sup, v);
      }
      report.entries.push_back({c, alpha, sup});
      report.total = std::max(report.total, sup);
    }
  }
  return report;
}

json CompositionProbeResult::to_json() const {
  return json{{"max_ratio", max_ratio},
              {"bound_witness", bound_witness},
              {"samples_compared", samples_compared},
              {"ladder_radii", ladder_radii},
              {"ladder_witness", ladder_witness},
              {"ladder_monotone", ladder_monotone}};
}

double composition_witness(const ScalarMap& psi, const LocalFunction& f1,
                           double hull_lower, double hull_upper, double radius,
                           int order) {
  if (order < 0 || order > 2)
    throw InvalidArgument("composition witness is implemented for k <= 2");
  if (static_cast<int>(psi.derivatives.size()) < order + 2)
    throw InvalidArgument("psi needs closed-form derivatives up to order k + 1");
  // L[j] = sup over the hull of |psi^(j)|, j = 1 .. k + 1.
  std::vector<double> L(static_cast<std::size_t>(order + 2), 0.0);
  const int samples = 20001;
  for (int i = 0; i < samples; ++i) {
    double y = hull_lower + (hull_upper - hull_lower) * i / (samples - 1);
    for (int j = 1; j <= order + 1; ++j)
      L[static_cast<std::size_t>(j)] = std::max(
          L[static_cast<std::size_t>(j)], std::abs(psi.derivatives[static_cast<std::size_t>(j)](y)));
  }
  // a[j] = sup over K of |f1^(j)|.
  std::vector<double> a(3, 0.0);
  for (int j = 1; j <= order; ++j)
    a[static_cast<std::size_t>(j)] = f1.derivative(j).cwiseAbs().maxCoeff();

  // k = 0: mean value theorem on the convex hull.
  double c = L[1];
  if (order >= 1) {
    // d(Psi o f1) - d(Psi o f2) = Psi'(f1) (f1' - f2') + (Psi'(f1) - Psi'(f2)) f2'
    c = std::max(c, L[1] + L[2] * (a[1] + radius));
  }
  if (order >= 2) {
    // Four-term expansion of the second derivative; |f2'| <= a1 + R.
    double s = a[1] + radius;
    c = std::max(c, L[3] * s * s + L[2] * (2.0 * a[1] + radius) + L[2] * a[2] + L[1]);
  }
  return c;
}

CompositionProbeResult composition_bound_probe(const ScalarMap& psi,
                                               const LocalFunction& f1,
                                               const std::vector<LocalFunction>& samples,
                                               double hull_lower, double hull_upper,
                                               double radius, int order) {
  if (f1.dim() != 1) throw InvalidArgument("probe works on scalar functions");
  const LocalGrid& grid = f1.grid();
  auto inside_hull = [&](const LocalFunction& f) {
    const Matrix& v = f.values();
    for (int i = grid.first_interior(); i <= grid.last_interior(); ++i) {
      if (v(0, i) < hull_lower || v(0, i) > hull_upper) return false;
    }
    return true;
  };
  auto compose = [&](const LocalFunction& f) {
    Matrix out(1, grid.node_count());
    for (int i = 0; i < grid.node_count(); ++i)
      out(0, i) = psi.derivatives[0](f.values()(0, i));
    return LocalFunction(grid, std::move(out));
  };
  if (!inside_hull(f1)) throw HypothesisViolated("f1(K) is not inside K~");

  CompositionProbeResult result;
  LocalFunction composed1 = compose(f1);
  for (const LocalFunction& f2 : samples) {
    if (!inside_hull(f2)) throw HypothesisViolated("sample f2(K) leaves K~");
    double input = cr_norm(f1 - f2, order);
    if (input > radius)
      throw HypothesisViolated("sample is farther than R from f1 in C^k(K)");
    if (input == 0.0) continue;
    double output = cr_norm(composed1 - compose(f2), order);
    double ratio = output / input;
    if (!std::isfinite(ratio)) throw HypothesisViolated("non-finite ratio");
    result.max_ratio = std::max(result.max_ratio, ratio);
    ++result.samples_compared;
  }
  result.bound_witness =
      composition_witness(psi, f1, hull_lower, hull_upper, radius, order);
  for (double r : {0.1, 0.5, 1.0}) {
    result.ladder_radii.push_back(r);
    result.ladder_witness.push_back(
        composition_witness(psi, f1, hull_lower, hull_upper, r, order));
  }
  for (std::size_t i = 1; i < result.ladder_witness.size(); ++i) {
    if (result.ladder_witness[i] < result.ladder_witness[i - 1])
      result.ladder_monotone = false;
  }
  return result;
}

}  // namespace mapcalc
