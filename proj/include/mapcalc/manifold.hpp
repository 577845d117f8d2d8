#pragma once

#include "mapcalc/expression.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace mapcalc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using json = nlohmann::json;

/// A point of the target manifold. Ambient coordinates in R^3 for the
/// sphere, coordinates reduced into [0, period) for the torus.
struct Point {
  Vector coords;
};

/// A tangent vector `vec` at `base`, stored in ambient coordinates.
struct TangentVector {
  Point base;
  Vector vec;
};

/// A linear map between two tangent spaces written in orthonormal frames at
/// the source and target base points.
struct FiberLinearMap {
  Point source_base;
  Point target_base;
  Matrix matrix;
};

/// Strictly positive scalar field lambda on the ambient space. The metric
/// becomes lambda(p) times the round metric.
class ConformalFactor {
 public:
  /// Parses the expression and samples its minimum on the sphere of the
  /// given radius.
  ConformalFactor(const std::string& expression, double radius);

  double value(const Eigen::Vector3d& x) const { return expr_.value(x); }
  double value_and_gradient(const Eigen::Vector3d& x,
                            Eigen::Vector3d& gradient) const {
    return expr_.value_and_gradient(x, gradient);
  }
  const std::string& expression() const noexcept { return expr_.source(); }

  /// Minimum over a dense Fibonacci sample of the sphere.
  double sampled_minimum() const noexcept { return minimum_; }

 private:
  Expression expr_;
  double minimum_;
};

/// A connected, complete Riemannian target manifold with closed-form
/// geometry: the round sphere S^2 of a given radius or a flat torus
/// R^n / (period lattice). The sphere may carry an optional conformal
/// factor, in which case geodesics are integrated numerically.
class TargetManifold {
 public:
  enum class Kind { RoundSphere, FlatTorus };

  static TargetManifold round_sphere(double radius = 1.0);
  static TargetManifold flat_torus(std::vector<double> periods);

  /// Sphere only. The factor must be strictly positive on the sphere.
  TargetManifold with_conformal_factor(const std::string& expression) const;
  TargetManifold without_conformal_factor() const;

  Kind kind() const noexcept { return kind_; }
  bool is_sphere() const noexcept { return kind_ == Kind::RoundSphere; }
  bool is_torus() const noexcept { return kind_ == Kind::FlatTorus; }
  double radius() const noexcept { return radius_; }
  const std::vector<double>& periods() const noexcept { return periods_; }
  const std::optional<ConformalFactor>& conformal() const noexcept {
    return conformal_;
  }

  /// Intrinsic dimension.
  int dimension() const noexcept;
  /// Length of Point::coords and TangentVector::vec.
  int ambient_dimension() const noexcept;

  /// Validates and canonicalizes (torus coordinates are reduced). Throws
  /// InvalidPoint.
  Point make_point(const Vector& coords) const;
  /// Throws InvalidPoint when `vec` is not tangent at `base`.
  TangentVector make_tangent(const Point& base, const Vector& vec) const;
  Vector project_to_tangent(const Point& base, const Vector& v) const;

  /// Conformal factor at p, 1 without a factor.
  double conformal_value(const Point& p) const;

  /// Columns form a frame of T_pN that is orthonormal for this metric.
  Matrix orthonormal_frame(const Point& p) const;
  /// Components of v in the given h-orthonormal frame at p.
  Vector frame_components(const Point& p, const Matrix& frame,
                          const Vector& v) const;

  /// Torus helpers: reduce into [0, period) and shortest representative in
  /// (-period/2, period/2].
  Vector reduce(const Vector& coords) const;
  Vector wrap(const Vector& displacement) const;

  json to_json() const;
  static TargetManifold from_json(const json& j);

  bool operator==(const TargetManifold& other) const;

 private:
  TargetManifold() = default;

  Kind kind_ = Kind::RoundSphere;
  double radius_ = 1.0;
  std::vector<double> periods_;
  std::optional<ConformalFactor> conformal_;
};

/// Endpoint at time 1 of the geodesic with initial velocity v.
Point exp_map(const TargetManifold& m, const TangentVector& v);

/// Inverse of exp_p inside the injectivity radius. Throws
/// BeyondInjectivityRadius when dist(p, q) > inj(p) - 1e-6.
TangentVector log_map(const TargetManifold& m, const Point& p, const Point& q);

double distance(const TargetManifold& m, const Point& p, const Point& q);
double injectivity_radius(const TargetManifold& m, const Point& p);

/// h_p(v, w). Throws BaseMismatch when the base points differ.
double metric_inner(const TargetManifold& m, const TangentVector& v,
                    const TangentVector& w);
double metric_norm(const TargetManifold& m, const TangentVector& v);

/// The fiber map v -> log_{p_dst}(exp_{p_src} v), with exp taken in
/// `source` and log in `dest`. Returns the ambient vector at p_dst.
Vector fiber_transition(const TargetManifold& source,
                        const TargetManifold& dest, const Point& p_src,
                        const Point& p_dst, const Vector& v);

/// Derivative at v0 of the fiber map above, in orthonormal frames of each
/// metric. Central differences with step 1e-6 per frame direction; exact
/// identity for flat tori.
FiberLinearMap fiber_transition_derivative(const TargetManifold& source,
                                           const TargetManifold& dest,
                                           const Point& p_src,
                                           const Point& p_dst,
                                           const TangentVector& v0);

FiberLinearMap fiber_transition_derivative(const TargetManifold& m,
                                           const Point& p_src,
                                           const Point& p_dst,
                                           const TangentVector& v0);

/// Applies a fiber linear map to an ambient vector at its source base.
Vector apply(const TargetManifold& source, const TargetManifold& dest,
             const FiberLinearMap& map, const Vector& v);

/// Rotation of R^3 taking the unit vector `from` to the unit vector `to`
/// within their common plane, applied to `v`. Singular when from = -to.
Eigen::Vector3d minimal_rotation(const Eigen::Vector3d& from,
                                 const Eigen::Vector3d& to,
                                 const Eigen::Vector3d& v);

}  // namespace mapcalc
