#include "mapcalc/target_chart.hpp"

#include "mapcalc/errors.hpp"

#include <cmath>
#include <numbers>

namespace mapcalc {

namespace {

Eigen::Vector3d as3(const Vector& v) { return Eigen::Vector3d(v[0], v[1], v[2]); }

}  // namespace

TargetChart TargetChart::sphere_cap(const TargetManifold& m,
                                    const Point& center, double cap_angle) {
  if (!m.is_sphere()) throw InvalidArgument("sphere_cap needs a sphere target");
  if (!(cap_angle > 0.0 && cap_angle < std::numbers::pi))
    throw InvalidArgument("cap angle must lie in (0, pi)");
  TargetChart chart(m, center);
  chart.cap_angle_ = cap_angle;
  chart.center_frame_ = m.without_conformal_factor().orthonormal_frame(center);
  return chart;
}

TargetChart TargetChart::torus_box(const TargetManifold& m, const Point& center,
                                   const Vector& half_widths) {
  if (!m.is_torus()) throw InvalidArgument("torus_box needs a torus target");
  if (half_widths.size() != m.dimension())
    throw InvalidArgument("half-width vector has wrong length");
  for (Eigen::Index i = 0; i < half_widths.size(); ++i) {
    double p = m.periods()[static_cast<std::size_t>(i)];
    if (!(half_widths[i] > 0.0 && half_widths[i] < 0.5 * p))
      throw InvalidArgument("box half-widths must lie in (0, period/2)");
  }
  TargetChart chart(m, center);
  chart.half_widths_ = half_widths;
  return chart;
}

bool TargetChart::contains(const Point& p) const {
  if (manifold_.is_torus()) {
    Vector d = manifold_.wrap(p.coords - center_.coords);
    return (d.array().abs() < half_widths_.array()).all();
  }
  Eigen::Vector3d a = as3(center_.coords), b = as3(p.coords);
  double angle = std::atan2(a.cross(b).norm(), a.dot(b));
  return angle < cap_angle_;
}

Vector TargetChart::coordinates(const Point& p) const {
  if (manifold_.is_torus())
    return center_.coords + manifold_.wrap(p.coords - center_.coords);
  double r = manifold_.radius();
  Vector c = center_.coords / r;
  double denom = r + p.coords.dot(c);
  return r * (center_frame_.transpose() * p.coords) / denom;
}

Matrix TargetChart::frame(const Point& p) const {
  if (manifold_.is_torus()) return Matrix::Identity(manifold_.dimension(), manifold_.dimension());
  Eigen::Vector3d from = as3(center_.coords).normalized();
  Eigen::Vector3d to = as3(p.coords).normalized();
  Matrix f(3, 2);
  for (int j = 0; j < 2; ++j)
    f.col(j) = minimal_rotation(from, to, as3(center_frame_.col(j)));
  if (manifold_.conformal()) f /= std::sqrt(manifold_.conformal_value(p));
  return f;
}

Vector TargetChart::trivialize(const Point& p, const Vector& v) const {
  return manifold_.frame_components(p, frame(p), v);
}

json TargetChart::to_json() const {
  json j;
  j["center"] = std::vector<double>(center_.coords.data(),
                                    center_.coords.data() + center_.coords.size());
  if (manifold_.is_torus()) {
    j["type"] = "torus_box";
    j["half_widths"] = std::vector<double>(half_widths_.data(),
                                           half_widths_.data() + half_widths_.size());
  } else {
    j["type"] = "sphere_cap";
    j["cap_angle"] = cap_angle_;
  }
  return j;
}

}  // namespace mapcalc
