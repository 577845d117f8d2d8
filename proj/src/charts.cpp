#include "mapcalc/charts.hpp"

#include "mapcalc/errors.hpp"
#include "mapcalc/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace mapcalc {

namespace {

// Evaluates fn(chart, node) on every node of f's grids, one column each.
std::vector<Matrix> nodewise(const SampledMap& f, int rows,
                             const std::function<Vector(int, int)>& fn) {
  std::vector<Matrix> blocks(static_cast<std::size_t>(f.atlas().chart_count()));
  parallel_for(f.atlas().chart_count(), [&](int c) {
    Matrix block(rows, f.grid(c).node_count());
    for (int node = 0; node < f.grid(c).node_count(); ++node)
      block.col(node) = fn(c, node);
    blocks[static_cast<std::size_t>(c)] = std::move(block);
  });
  return blocks;
}

void require_same_sampling(const SampledMap& f, const SampledMap& g) {
  if (!(f.atlas() == g.atlas()) || f.resolution() != g.resolution())
    throw ResolutionMismatch("maps are sampled on different grids");
}

bool same_underlying(const TargetManifold& a, const TargetManifold& b) {
  return a.without_conformal_factor() == b.without_conformal_factor();
}

double sup_distance(const TargetManifold& m, const SampledMap& f, const SampledMap& g) {
  double sup = 0.0;
  for (int c = 0; c < f.atlas().chart_count(); ++c) {
    for (int node = 0; node < f.grid(c).node_count(); ++node)
      sup = std::max(sup, distance(m, f.value(c, node), g.value(c, node)));
  }
  return sup;
}

}  // namespace

double default_delta(const SampledMap& f) {
  return 0.4 * min_injectivity_radius(f) / 6.0;
}

PullbackSection chart_forward(const MapPtr& f, const SampledMap& g, double delta) {
  require_same_sampling(*f, g);
  if (!(f->target() == g.target()))
    throw ResolutionMismatch("maps have different targets");
  if (!(delta > 0.0) || !(delta < min_injectivity_radius(*f)))
    throw InvalidArgument("delta must lie in (0, min inj along f)");
  const TargetManifold& m = f->target();
  std::vector<Matrix> vectors =
      nodewise(*f, m.ambient_dimension(), [&](int c, int node) {
        Point p = f->value(c, node);
        Point q = g.value(c, node);
        double d = distance(m, p, q);
        if (!(d < delta))
          throw WellDefinednessViolated(
              "dist(f(p), g(p)) = " + std::to_string(d) + " at chart " +
              std::to_string(c) + " node " + std::to_string(node) +
              " is not below delta = " + std::to_string(delta));
        return log_map(m, p, q).vec;
      });
  return PullbackSection(f, std::move(vectors), delta);
}

SampledMap chart_inverse(const SampledMap& f, const PullbackSection& s) {
  if (!same_map(f, s.base_map()))
    throw BaseMismatch("section is not based on this map");
  return chart_inverse(s);
}

SampledMap chart_inverse(const PullbackSection& s) {
  s.check_within_bound();
  const SampledMap& f = s.base_map();
  const TargetManifold& m = f.target();
  std::vector<Matrix> values = nodewise(f, m.ambient_dimension(), [&](int c, int node) {
    return exp_map(m, s.at(c, node)).coords;
  });
  return SampledMap(f.atlas(), m, f.resolution(), std::move(values));
}

PullbackSection transition(const MapPtr& g, const PullbackSection& s) {
  const SampledMap& f = s.base_map();
  require_same_sampling(f, *g);
  const TargetManifold& src = f.target();
  const TargetManifold& dst = g->target();
  if (!same_underlying(src, dst))
    throw ResolutionMismatch("maps live in different target manifolds");
  double bound = 0.0;
  if (src == dst) {
    bound = s.bound() + sup_distance(src, f, *g);
    if (!(bound < min_injectivity_radius(*g)))
      throw WellDefinednessViolated(
          "bound + sup dist(f, g) reaches the injectivity radius along g");
  }
  s.check_within_bound();
  std::vector<Matrix> vectors =
      nodewise(*g, dst.ambient_dimension(), [&](int c, int node) {
        try {
          return fiber_transition(src, dst, f.value(c, node), g->value(c, node),
                                  s.chart_vectors(c).col(node));
        } catch (const BeyondInjectivityRadius& e) {
          throw WellDefinednessViolated(std::string("transition: ") + e.what());
        }
      });
  if (!(src == dst)) {
    double sup = 0.0;
    for (int c = 0; c < g->atlas().chart_count(); ++c) {
      for (int node = 0; node < g->grid(c).node_count(); ++node)
        sup = std::max(sup, metric_norm(dst, TangentVector{g->value(c, node),
                                                           vectors[static_cast<std::size_t>(c)].col(node)}));
    }
    bound = std::min(min_injectivity_radius(*g), 2.0 * sup + 1e-12);
  }
  return PullbackSection(g, std::move(vectors), bound);
}

PullbackSection transition_derivative(const MapPtr& g, const PullbackSection& s0,
                                      const PullbackSection& s) {
  const SampledMap& f = s0.base_map();
  if (!same_map(f, s.base_map()))
    throw BaseMismatch("s0 and s must share their base map");
  require_same_sampling(f, *g);
  const TargetManifold& src = f.target();
  const TargetManifold& dst = g->target();
  if (!same_underlying(src, dst))
    throw ResolutionMismatch("maps live in different target manifolds");
  if (src == dst && !(s0.bound() + sup_distance(src, f, *g) < min_injectivity_radius(*g)))
    throw WellDefinednessViolated(
        "bound + sup dist(f, g) reaches the injectivity radius along g");
  std::vector<Matrix> vectors =
      nodewise(*g, dst.ambient_dimension(), [&](int c, int node) {
        Point p = f.value(c, node);
        Point q = g->value(c, node);
        try {
          FiberLinearMap d = fiber_transition_derivative(src, dst, p, q, s0.at(c, node));
          return apply(src, dst, d, s.chart_vectors(c).col(node));
        } catch (const BeyondInjectivityRadius& e) {
          throw WellDefinednessViolated(std::string("transition derivative: ") + e.what());
        }
      });
  return PullbackSection(g, std::move(vectors), s.bound());
}

SampledMap with_target(const SampledMap& f, const TargetManifold& target) {
  if (!same_underlying(f.target(), target))
    throw InvalidArgument("with_target changes only the metric");
  std::vector<Matrix> values;
  for (int c = 0; c < f.atlas().chart_count(); ++c) values.push_back(f.chart_values(c));
  return SampledMap(f.atlas(), target, f.resolution(), std::move(values));
}

TargetMap TargetMap::identity(const TargetManifold& n) {
  return {"identity", n, n, [](const Point& p) { return p.coords; }};
}

TargetMap TargetMap::torus_translation(const TargetManifold& torus, const Vector& shift) {
  if (!torus.is_torus()) throw InvalidArgument("translation needs a torus");
  return {"translation", torus, torus,
          [shift](const Point& p) -> Vector { return p.coords + shift; }};
}

TargetMap TargetMap::sphere_rotation(const TargetManifold& sphere,
                                     const Eigen::Vector3d& axis, double angle) {
  if (!sphere.is_sphere()) throw InvalidArgument("rotation needs a sphere");
  Eigen::Matrix3d r = Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
  return {"rotation", sphere, sphere, [r](const Point& p) -> Vector {
            Eigen::Vector3d x(p.coords[0], p.coords[1], p.coords[2]);
            Eigen::Vector3d y = r * x;
            Vector out(3);
            out << y[0], y[1], y[2];
            return out;
          }};
}

DomainMap DomainMap::identity(const DomainAtlas& a) {
  return {"identity", a, a, [](const Vector& x) { return x; }};
}

DomainMap DomainMap::circle_shift(double c) {
  return {"shift", DomainAtlas::circle(), DomainAtlas::circle(),
          [c](const Vector& x) -> Vector { return x.array() + c; }};
}

DomainMap DomainMap::circle_cover(int degree) {
  return {"cover", DomainAtlas::circle(), DomainAtlas::circle(),
          [degree](const Vector& x) -> Vector { return x * degree; }};
}

SampledMap pushforward(const TargetMap& g, const SampledMap& f) {
  if (!same_underlying(g.source, f.target()))
    throw InvalidArgument("pushforward: map does not start at f's target");
  std::vector<Matrix> values =
      nodewise(f, g.target.ambient_dimension(), [&](int c, int node) {
        return g.target.make_point(g.eval(f.value(c, node))).coords;
      });
  return SampledMap(f.atlas(), g.target, f.resolution(), std::move(values));
}

SampledMap pullback(const DomainMap& g, const SampledMap& f) {
  if (!(g.target == f.atlas()))
    throw InvalidArgument("pullback: map does not land in f's domain");
  return build_map(g.source, f.target(), f.resolution(), [&](int c, int node) {
    Vector angles = g.source.grid(c, f.resolution()).angles(node);
    return interpolate(f, reduce_angles(g.eval(angles))).coords;
  });
}

}  // namespace mapcalc
