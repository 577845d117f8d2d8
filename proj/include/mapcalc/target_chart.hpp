#pragma once

#include "mapcalc/manifold.hpp"

namespace mapcalc {

/// A chart (V, psi) of the target manifold together with the isometric
/// trivialization of TN over V used to differentiate sections.
///
/// Sphere: V is the open geodesic cap of angle `extent` around `center`,
/// psi is stereographic projection from the antipode of `center`, and the
/// frame at p is the frame at `center` moved by the minimal rotation.
/// Torus: V is an open box of half-widths `extent` around `center`, psi the
/// unwrapped coordinates and the frame the standard basis.
class TargetChart {
 public:
  static TargetChart sphere_cap(const TargetManifold& m, const Point& center,
                                double cap_angle);
  static TargetChart torus_box(const TargetManifold& m, const Point& center,
                               const Vector& half_widths);

  bool contains(const Point& p) const;
  /// psi(p). Defined beyond V (all of N minus the far pole or far faces) so
  /// stencils may step slightly outside.
  Vector coordinates(const Point& p) const;
  /// h-orthonormal frame of the trivialization at p.
  Matrix frame(const Point& p) const;
  /// Fiber coordinates pr_2 Phi(v) of a tangent vector at p.
  Vector trivialize(const Point& p, const Vector& v) const;

  const Point& center() const noexcept { return center_; }
  const TargetManifold& manifold() const noexcept { return manifold_; }

  json to_json() const;

 private:
  TargetChart(TargetManifold m, Point center) : manifold_(std::move(m)), center_(std::move(center)) {}

  TargetManifold manifold_;
  Point center_;
  double cap_angle_ = 0.0;
  Vector half_widths_;
  Matrix center_frame_;
};

}  // namespace mapcalc
