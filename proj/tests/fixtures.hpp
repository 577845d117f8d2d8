#pragma once

// Map families shared by the unit tests and the acceptance binary.

#include "mapcalc/charts.hpp"
#include "mapcalc/random_fields.hpp"
#include "mapcalc/sampled_map.hpp"
#include "mapcalc/section.hpp"

#include <cmath>
#include <numbers>

namespace fixtures {

using namespace mapcalc;

constexpr double kPi = std::numbers::pi;

inline TargetManifold sphere(double radius = 1.0) { return TargetManifold::round_sphere(radius); }
inline TargetManifold torus() { return TargetManifold::flat_torus({2 * kPi, 2 * kPi}); }

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

inline Vector vec3(const Eigen::Vector3d& v) { return vec({v[0], v[1], v[2]}); }

/// Rotated great circle theta -> R rot (cos theta, sin theta, 0).
inline SampledMap great_circle(const TargetManifold& m, int resolution,
                               const Eigen::Matrix3d& rot = Eigen::Matrix3d::Identity()) {
  double r = m.radius();
  MapFormula f{"great_circle", json::object(), [r, rot](const Vector& a) {
                 return vec3(r * (rot * Eigen::Vector3d(std::cos(a[0]), std::sin(a[0]), 0.0)));
               }};
  return sample_map(DomainAtlas::circle(), m, f, resolution);
}

/// offset + winding theta + amplitude sin(mode theta) on a circle domain.
inline SampledMap torus_loop(const TargetManifold& m, int resolution, const Vector& offset,
                             const Vector& winding, const Vector& amplitude, int mode = 1) {
  MapFormula f{"torus_linear", json::object(), [=](const Vector& a) {
                 return Vector(offset + winding * a[0] + amplitude * std::sin(mode * a[0]));
               }};
  return sample_map(DomainAtlas::circle(), m, f, resolution);
}

inline SampledMap constant_map(const TargetManifold& m, int resolution, const Point& p) {
  MapFormula f{"constant", json::object(), [p](const Vector&) { return p.coords; }};
  return sample_map(DomainAtlas::circle(), m, f, resolution);
}

/// A great circle in random position bent by a random smooth section.
inline SampledMap random_sphere_map(const TargetManifold& m, int resolution, Rng& rng) {
  MapPtr circle = share(great_circle(m, resolution, random_rotation(rng)));
  return chart_inverse(random_section(circle, 0.3 * m.radius(), uniform(rng, 0.0, 0.9), rng));
}

/// A winding-(1, 0) loop with random offset and a random sine bump.
inline SampledMap random_torus_map(const TargetManifold& m, int resolution, Rng& rng) {
  Vector offset = vec({uniform(rng, 0.0, m.periods()[0]), uniform(rng, 0.0, m.periods()[1])});
  Vector amplitude = vec({0.0, uniform(rng, 0.0, 0.5)});
  int mode = 1 + static_cast<int>(uniform(rng, 0.0, 3.0));
  return torus_loop(m, resolution, offset, vec({1.0, 0.0}), amplitude, mode);
}

/// sup over all nodes of the target distance between two maps on one grid.
inline double max_node_distance(const SampledMap& a, const SampledMap& b) {
  double sup = 0.0;
  for (int c = 0; c < a.atlas().chart_count(); ++c)
    for (int node = 0; node < a.grid(c).node_count(); ++node)
      sup = std::max(sup, distance(a.target(), a.value(c, node), b.value(c, node)));
  return sup;
}

/// sup over all nodes of the ambient difference of two sections.
inline double max_vector_difference(const PullbackSection& a, const PullbackSection& b) {
  double sup = 0.0;
  for (int c = 0; c < a.base_map().atlas().chart_count(); ++c)
    sup = std::max(sup, (a.chart_vectors(c) - b.chart_vectors(c)).colwise().norm().maxCoeff());
  return sup;
}

inline double max_vector_norm(const PullbackSection& a) {
  double sup = 0.0;
  for (int c = 0; c < a.base_map().atlas().chart_count(); ++c)
    sup = std::max(sup, a.chart_vectors(c).colwise().norm().maxCoeff());
  return sup;
}

/// (transition(s0 + eps s) - transition(s0 - eps s)) / (2 eps)
inline PullbackSection transition_difference(const MapPtr& g, const PullbackSection& s0,
                                             const PullbackSection& s, double eps) {
  PullbackSection plus = transition(g, (s0 + s * eps).with_bound(s0.bound()));
  PullbackSection minus = transition(g, (s0 - s * eps).with_bound(s0.bound()));
  return (plus - minus) * (1.0 / (2.0 * eps));
}

}  // namespace fixtures
