#pragma once

#include "mapcalc/section.hpp"

#include <functional>
#include <memory>
#include <string>

namespace mapcalc {

using MapPtr = std::shared_ptr<const SampledMap>;

inline MapPtr share(SampledMap f) { return std::make_shared<const SampledMap>(std::move(f)); }

/// 0.4 * (min inj along f) / 6.
double default_delta(const SampledMap& f);

/// phi_f(g): the section p -> log_{f(p)} g(p) with bound delta.
/// Throws InvalidArgument unless delta < min inj along f, and
/// WellDefinednessViolated when some node has dist(f(p), g(p)) >= delta.
PullbackSection chart_forward(const MapPtr& f, const SampledMap& g, double delta);

/// phi_f^-1(s): the map p -> exp_{f(p)} s(p). Throws BaseMismatch when s is
/// not based on f and WellDefinednessViolated when sup |s| >= s.bound.
SampledMap chart_inverse(const SampledMap& f, const PullbackSection& s);
SampledMap chart_inverse(const PullbackSection& s);

/// phi_g o phi_f^-1 applied to a section over f, nodewise
/// v -> log_{g(p)} exp_{f(p)} v. The maps may carry different metrics on the
/// same underlying target (exp in f's metric, log in g's). For equal metrics
/// s.bound + sup dist(f, g) must stay below min inj along g; the result
/// carries that sum as its bound. Throws WellDefinednessViolated.
PullbackSection transition(const MapPtr& g, const PullbackSection& s);

/// D(phi_g o phi_f^-1) at s0 applied to s, computed nodewise from the fiber
/// derivative. s0 and s must share their base map f. The output carries the
/// bound of s.
PullbackSection transition_derivative(const MapPtr& g, const PullbackSection& s0,
                                      const PullbackSection& s);

/// The same sampled values viewed in another metric on the same underlying
/// target (for example round versus conformal).
SampledMap with_target(const SampledMap& f, const TargetManifold& target);

/// Closed-form map N -> Z.
struct TargetMap {
  std::string name;
  TargetManifold source;
  TargetManifold target;
  std::function<Vector(const Point&)> eval;

  static TargetMap identity(const TargetManifold& n);
  static TargetMap torus_translation(const TargetManifold& torus, const Vector& shift);
  /// Rotation of the sphere about a unit axis.
  static TargetMap sphere_rotation(const TargetManifold& sphere,
                                   const Eigen::Vector3d& axis, double angle);
};

/// Closed-form map A -> M between domains, on angles.
struct DomainMap {
  std::string name;
  DomainAtlas source;
  DomainAtlas target;
  std::function<Vector(const Vector& angles)> eval;

  static DomainMap identity(const DomainAtlas& a);
  static DomainMap circle_shift(double c);
  static DomainMap circle_cover(int degree);
};

/// g o f, nodewise.
SampledMap pushforward(const TargetMap& g, const SampledMap& f);

/// f o g on the grids of g's source atlas at the resolution of f, through
/// cubic chart interpolation of f.
SampledMap pullback(const DomainMap& g, const SampledMap& f);

}  // namespace mapcalc
