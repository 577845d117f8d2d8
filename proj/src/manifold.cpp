#include "mapcalc/manifold.hpp"

#include "mapcalc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mapcalc {

namespace {

constexpr double kPi = std::numbers::pi;
// log is rejected this close to the injectivity radius.
constexpr double kInjectivityMargin = 1e-6;
constexpr double kFiberStep = 1e-6;
constexpr int kConformalSteps = 200;

Eigen::Vector3d as3(const Vector& v) { return Eigen::Vector3d(v[0], v[1], v[2]); }

Vector asX(const Eigen::Vector3d& v) {
  Vector out(3);
  out << v[0], v[1], v[2];
  return out;
}

// Fixed frame at the north pole, transported by minimal rotation; the south
// hemisphere uses the south pole instead so the rotation never degenerates.
Eigen::Matrix<double, 3, 2> round_frame(const Eigen::Vector3d& unit) {
  Eigen::Vector3d pole(0.0, 0.0, unit.z() >= 0.0 ? 1.0 : -1.0);
  Eigen::Vector3d a1 = Eigen::Vector3d::UnitX();
  Eigen::Vector3d a2 = pole.cross(a1);
  Eigen::Matrix<double, 3, 2> frame;
  frame.col(0) = minimal_rotation(pole, unit, a1);
  frame.col(1) = minimal_rotation(pole, unit, a2);
  return frame;
}

// ---------------------------------------------------------------------------
// Round sphere closed forms.

Vector sphere_exp(double radius, const Vector& base, const Vector& v) {
  double speed = v.norm();
  if (speed == 0.0) return base;
  double angle = speed / radius;
  Vector out = std::cos(angle) * base + (radius * std::sin(angle) / speed) * v;
  return out * (radius / out.norm());
}

Vector sphere_log(double radius, const Vector& p, const Vector& q,
                  double limit) {
  Eigen::Vector3d pp = as3(p), qq = as3(q);
  double cross = pp.cross(qq).norm();
  double dot = pp.dot(qq);
  double angle = std::atan2(cross, dot);
  if (radius * angle > limit) {
    throw BeyondInjectivityRadius("sphere log: distance " +
                                  std::to_string(radius * angle) +
                                  " exceeds injectivity limit");
  }
  Vector w = q - (dot / (radius * radius)) * p;
  double wn = w.norm();
  if (wn == 0.0 || angle == 0.0) return Vector::Zero(3);
  return (radius * angle / wn) * w;
}

// d/dt exp_p(v + t w) at t = 0.
Vector sphere_exp_derivative(double radius, const Vector& p, const Vector& v,
                             const Vector& w) {
  double r = v.norm();
  if (r == 0.0) return w;
  double a = r / radius;
  Vector u = v / r;
  double dr = u.dot(w);
  Vector du = (w - dr * u) / r;
  return -std::sin(a) / radius * dr * p + std::cos(a) * dr * u + radius * std::sin(a) * du;
}

// d/dt log_q(x(t)) for x(0) = x, x'(0) = y tangent at x. With theta the
// angle between q and x, log_q x = theta / sin(theta) (x - cos(theta) q).
Vector sphere_log_derivative(double radius, const Vector& q, const Vector& x,
                             const Vector& y) {
  Eigen::Vector3d qq = as3(q), xx = as3(x);
  double r2 = radius * radius;
  double c = qq.dot(xx) / r2;
  double theta = std::atan2(qq.cross(xx).norm() / r2, c);
  double dc = q.dot(y) / r2;
  double phi = 1.0, psi = 1.0 / 3.0;
  if (theta > 1e-4) {
    double sn = std::sin(theta);
    phi = theta / sn;
    psi = (sn - theta * std::cos(theta)) / (sn * sn * sn);
  } else {
    phi = 1.0 + theta * theta / 6.0;
    psi += 2.0 * theta * theta / 15.0;
  }
  return -psi * dc * (x - std::cos(theta) * q) + phi * (y - dc * q);
}

// ---------------------------------------------------------------------------
// Conformally scaled sphere: geodesic ODE integrated with RK4.
//
// With lambda = e^{2 sigma}, geodesics of lambda*g satisfy
//   x'' = -|x'|^2 x / R^2 - 2 dsigma(x') x' + |x'|^2 P grad sigma
// where |.| is the round norm and P the tangential projection.

struct GeodesicState {
  Eigen::Vector3d x;
  Eigen::Vector3d u;
};

GeodesicState conformal_rhs(const ConformalFactor& factor, double radius,
                            const GeodesicState& s) {
  Eigen::Vector3d grad;
  double lambda = factor.value_and_gradient(s.x, grad);
  Eigen::Vector3d grad_sigma = grad / (2.0 * lambda);
  Eigen::Vector3d n = s.x / s.x.norm();
  Eigen::Vector3d tangential = grad_sigma - n.dot(grad_sigma) * n;
  double speed2 = s.u.squaredNorm();
  GeodesicState d;
  d.x = s.u;
  d.u = -speed2 * s.x / (radius * radius) - 2.0 * grad_sigma.dot(s.u) * s.u +
        speed2 * tangential;
  return d;
}

Vector conformal_exp(const ConformalFactor& factor, double radius,
                     const Vector& base, const Vector& v) {
  double speed = v.norm();
  if (speed == 0.0) return base;
  // A fixed step count keeps the discrete flow smooth in v, which the
  // finite-difference derivative checks rely on.
  const int steps = kConformalSteps;
  double dt = 1.0 / steps;
  GeodesicState s{as3(base), as3(v)};
  auto axpy = [](const GeodesicState& a, double h, const GeodesicState& b) {
    return GeodesicState{a.x + h * b.x, a.u + h * b.u};
  };
  for (int i = 0; i < steps; ++i) {
    GeodesicState k1 = conformal_rhs(factor, radius, s);
    GeodesicState k2 = conformal_rhs(factor, radius, axpy(s, 0.5 * dt, k1));
    GeodesicState k3 = conformal_rhs(factor, radius, axpy(s, 0.5 * dt, k2));
    GeodesicState k4 = conformal_rhs(factor, radius, axpy(s, dt, k3));
    s.x += dt / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
    s.u += dt / 6.0 * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u);
  }
  return asX(s.x * (radius / s.x.norm()));
}

// Shooting: Newton iteration on the 2D frame coordinates of v, with the
// round log at q as residual.
Vector conformal_log(const ConformalFactor& factor, double radius,
                     const Vector& p, const Vector& q) {
  Eigen::Vector3d pu = as3(p) / radius, qu = as3(q) / radius;
  Eigen::Matrix<double, 3, 2> fp = round_frame(pu);
  Eigen::Matrix<double, 3, 2> fq = round_frame(qu);
  double limit = kPi * radius - kInjectivityMargin;

  auto residual = [&](const Eigen::Vector2d& c) -> Eigen::Vector2d {
    Vector v = asX(fp * c);
    Vector end = conformal_exp(factor, radius, p, v);
    Vector r = sphere_log(radius, q, end, limit);
    return fq.transpose() * as3(r);
  };

  Vector guess = sphere_log(radius, p, q, limit);
  Eigen::Vector2d c = fp.transpose() * as3(guess);
  Eigen::Vector2d r = residual(c);
  double tol = 1e-15 * radius;
  for (int iter = 0; iter < 60 && r.norm() > tol; ++iter) {
    Eigen::Matrix2d jac;
    double h = 1e-7 * std::max(1.0, c.norm());
    for (int j = 0; j < 2; ++j) {
      Eigen::Vector2d e = Eigen::Vector2d::Zero();
      e[j] = h;
      jac.col(j) = (residual(c + e) - residual(c - e)) / (2.0 * h);
    }
    Eigen::Vector2d step = jac.partialPivLu().solve(-r);
    Eigen::Vector2d next = c + step;
    Eigen::Vector2d rn = residual(next);
    if (!(rn.norm() < r.norm())) {
      // Stalled at rounding level: accept if already tiny.
      if (r.norm() < 1e-11 * radius) break;
      throw BeyondInjectivityRadius("conformal log: shooting did not converge");
    }
    c = next;
    r = rn;
  }
  if (!(r.norm() < 1e-9 * radius))
    throw BeyondInjectivityRadius("conformal log: shooting did not converge");
  return asX(fp * c);
}

}  // namespace

// ---------------------------------------------------------------------------

Eigen::Vector3d minimal_rotation(const Eigen::Vector3d& from,
                                 const Eigen::Vector3d& to,
                                 const Eigen::Vector3d& v) {
  Eigen::Vector3d s = from + to;
  return v - (s.dot(v) / (1.0 + from.dot(to))) * s + 2.0 * from.dot(v) * to;
}

ConformalFactor::ConformalFactor(const std::string& expression, double radius)
    : expr_(expression), minimum_(0.0) {
  // Fibonacci lattice.
  const int n = 4096;
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  double lo = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    double z = 1.0 - 2.0 * (i + 0.5) / n;
    double r = std::sqrt(1.0 - z * z);
    double phi = golden * i;
    Eigen::Vector3d x(r * std::cos(phi), r * std::sin(phi), z);
    lo = std::min(lo, value(radius * x));
  }
  minimum_ = lo;
}

TargetManifold TargetManifold::round_sphere(double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw InvalidArgument("sphere radius must be positive");
  TargetManifold m;
  m.kind_ = Kind::RoundSphere;
  m.radius_ = radius;
  return m;
}

TargetManifold TargetManifold::flat_torus(std::vector<double> periods) {
  if (periods.empty()) throw InvalidArgument("torus needs at least one period");
  for (double p : periods) {
    if (!(p > 0.0) || !std::isfinite(p))
      throw InvalidArgument("torus periods must be positive");
  }
  TargetManifold m;
  m.kind_ = Kind::FlatTorus;
  m.periods_ = std::move(periods);
  return m;
}

TargetManifold TargetManifold::with_conformal_factor(
    const std::string& expression) const {
  if (!is_sphere())
    throw InvalidArgument("conformal factors are supported on the sphere only");
  ConformalFactor factor(expression, radius_);
  double lo = factor.sampled_minimum();
  if (!(lo > 0.0) || !std::isfinite(lo))
    throw InvalidArgument("conformal factor must be strictly positive: " +
                          expression);
  TargetManifold m = *this;
  m.conformal_ = std::move(factor);
  return m;
}

TargetManifold TargetManifold::without_conformal_factor() const {
  TargetManifold m = *this;
  m.conformal_.reset();
  return m;
}

int TargetManifold::dimension() const noexcept {
  return is_sphere() ? 2 : static_cast<int>(periods_.size());
}

int TargetManifold::ambient_dimension() const noexcept {
  return is_sphere() ? 3 : static_cast<int>(periods_.size());
}

Vector TargetManifold::reduce(const Vector& coords) const {
  Vector out(coords.size());
  for (Eigen::Index i = 0; i < coords.size(); ++i) {
    double period = periods_[static_cast<std::size_t>(i)];
    double r = std::fmod(coords[i], period);
    if (r < 0.0) r += period;
    if (r >= period) r -= period;
    out[i] = r;
  }
  return out;
}

Vector TargetManifold::wrap(const Vector& displacement) const {
  Vector out(displacement.size());
  for (Eigen::Index i = 0; i < displacement.size(); ++i) {
    double period = periods_[static_cast<std::size_t>(i)];
    out[i] = displacement[i] - period * std::round(displacement[i] / period);
  }
  return out;
}

Point TargetManifold::make_point(const Vector& coords) const {
  if (coords.size() != ambient_dimension())
    throw InvalidPoint("coordinate vector has wrong length");
  if (!coords.allFinite()) throw InvalidPoint("non-finite coordinates");
  if (is_sphere()) {
    double n = coords.norm();
    if (std::abs(n - radius_) > 1e-12 * std::max(1.0, radius_))
      throw InvalidPoint("point is not on the sphere of radius " +
                         std::to_string(radius_));
    return Point{coords};
  }
  return Point{reduce(coords)};
}

TangentVector TargetManifold::make_tangent(const Point& base,
                                           const Vector& vec) const {
  if (vec.size() != ambient_dimension())
    throw InvalidPoint("tangent vector has wrong length");
  if (!vec.allFinite()) throw InvalidPoint("non-finite tangent vector");
  if (is_sphere()) {
    double dot = base.coords.dot(vec);
    if (std::abs(dot) > 1e-12 * std::max(1.0, radius_ * vec.norm()))
      throw InvalidPoint("vector is not tangent to the sphere");
  }
  return TangentVector{base, vec};
}

Vector TargetManifold::project_to_tangent(const Point& base,
                                          const Vector& v) const {
  if (!is_sphere()) return v;
  return v - (base.coords.dot(v) / base.coords.squaredNorm()) * base.coords;
}

double TargetManifold::conformal_value(const Point& p) const {
  if (!conformal_) return 1.0;
  return conformal_->value(as3(p.coords));
}

Matrix TargetManifold::orthonormal_frame(const Point& p) const {
  if (is_torus()) return Matrix::Identity(dimension(), dimension());
  Matrix frame = round_frame(as3(p.coords) / p.coords.norm());
  if (conformal_) frame /= std::sqrt(conformal_value(p));
  return frame;
}

Vector TargetManifold::frame_components(const Point& p, const Matrix& frame,
                                        const Vector& v) const {
  return conformal_value(p) * (frame.transpose() * v);
}

json TargetManifold::to_json() const {
  json j;
  if (is_sphere()) {
    j["kind"] = "sphere";
    j["radius"] = radius_;
  } else {
    j["kind"] = "torus";
    j["periods"] = periods_;
  }
  if (conformal_) j["conformal"] = conformal_->expression();
  return j;
}

TargetManifold TargetManifold::from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw ConfigError("manifold descriptor needs a 'kind' field");
  std::string kind = j.at("kind").get<std::string>();
  TargetManifold m = [&] {
    if (kind == "sphere") return round_sphere(j.value("radius", 1.0));
    if (kind == "torus") {
      if (!j.contains("periods"))
        throw ConfigError("torus descriptor needs 'periods'");
      return flat_torus(j.at("periods").get<std::vector<double>>());
    }
    throw ConfigError("unknown manifold kind '" + kind + "'");
  }();
  if (j.contains("conformal") && !j.at("conformal").is_null())
    m = m.with_conformal_factor(j.at("conformal").get<std::string>());
  return m;
}

bool TargetManifold::operator==(const TargetManifold& other) const {
  if (kind_ != other.kind_) return false;
  if (is_sphere() && radius_ != other.radius_) return false;
  if (is_torus() && periods_ != other.periods_) return false;
  if (conformal_.has_value() != other.conformal_.has_value()) return false;
  if (conformal_ && conformal_->expression() != other.conformal_->expression())
    return false;
  return true;
}

// ---------------------------------------------------------------------------

Point exp_map(const TargetManifold& m, const TangentVector& v) {
  if (m.is_torus()) return Point{m.reduce(v.base.coords + v.vec)};
  if (m.conformal())
    return Point{conformal_exp(*m.conformal(), m.radius(), v.base.coords, v.vec)};
  return Point{sphere_exp(m.radius(), v.base.coords, v.vec)};
}

TangentVector log_map(const TargetManifold& m, const Point& p, const Point& q) {
  double limit = injectivity_radius(m, p) - kInjectivityMargin;
  if (m.is_torus()) {
    Vector d = m.wrap(q.coords - p.coords);
    if (d.norm() > limit)
      throw BeyondInjectivityRadius("torus log: distance " +
                                    std::to_string(d.norm()) +
                                    " reaches the cut locus");
    return TangentVector{p, d};
  }
  if (m.conformal()) {
    Vector v = conformal_log(*m.conformal(), m.radius(), p.coords, q.coords);
    TangentVector tv{p, v};
    if (metric_norm(m, tv) > limit)
      throw BeyondInjectivityRadius("conformal log beyond injectivity bound");
    return tv;
  }
  return TangentVector{p, sphere_log(m.radius(), p.coords, q.coords, limit)};
}

double distance(const TargetManifold& m, const Point& p, const Point& q) {
  if (m.is_torus()) return m.wrap(q.coords - p.coords).norm();
  if (m.conformal()) return metric_norm(m, log_map(m, p, q));
  Eigen::Vector3d pp = as3(p.coords), qq = as3(q.coords);
  return m.radius() * std::atan2(pp.cross(qq).norm(), pp.dot(qq));
}

double injectivity_radius(const TargetManifold& m, const Point& /*p*/) {
  if (m.is_torus())
    return 0.5 * *std::min_element(m.periods().begin(), m.periods().end());
  if (m.conformal()) {
    // Conservative: half the round cut distance in the smallest local scale.
    return 0.5 * kPi * m.radius() *
           std::sqrt(m.conformal()->sampled_minimum());
  }
  return kPi * m.radius();
}

double metric_inner(const TargetManifold& m, const TangentVector& v,
                    const TangentVector& w) {
  const Vector& a = v.base.coords;
  const Vector& b = w.base.coords;
  if (a.size() != b.size() ||
      (a - b).lpNorm<Eigen::Infinity>() > 1e-12 * std::max(1.0, a.norm()))
    throw BaseMismatch("metric_inner: vectors live at different base points");
  return m.conformal_value(v.base) * v.vec.dot(w.vec);
}

double metric_norm(const TargetManifold& m, const TangentVector& v) {
  return std::sqrt(m.conformal_value(v.base)) * v.vec.norm();
}

Vector fiber_transition(const TargetManifold& source,
                        const TargetManifold& dest, const Point& p_src,
                        const Point& p_dst, const Vector& v) {
  if (source.is_torus() && source == dest) {
    // log_{p_dst} exp_{p_src} is a translation; skip the double reduction.
    Vector out = source.wrap(source.wrap(p_src.coords - p_dst.coords) + v);
    if (out.norm() > injectivity_radius(dest, p_dst) - kInjectivityMargin)
      throw BeyondInjectivityRadius("torus transition leaves the log domain");
    return out;
  }
  Point end = exp_map(source, TangentVector{p_src, v});
  return log_map(dest, p_dst, end).vec;
}

FiberLinearMap fiber_transition_derivative(const TargetManifold& source,
                                           const TargetManifold& dest,
                                           const Point& p_src,
                                           const Point& p_dst,
                                           const TangentVector& v0) {
  int dim = dest.dimension();
  if (source.is_torus() && source == dest) {
    // Raise the same error the finite-difference route would.
    fiber_transition(source, dest, p_src, p_dst, v0.vec);
    return FiberLinearMap{p_src, p_dst, Matrix::Identity(dim, dim)};
  }
  if (source == dest) {
    double reach = distance(dest, p_src, p_dst) + metric_norm(source, v0);
    if (reach >= injectivity_radius(dest, p_dst))
      throw BeyondInjectivityRadius(
          "fiber derivative: dist + |v0| reaches the injectivity radius");
  }
  Matrix src_frame = source.orthonormal_frame(p_src);
  Matrix dst_frame = dest.orthonormal_frame(p_dst);
  Matrix jac(dim, source.dimension());
  if (source == dest && !source.conformal()) {
    fiber_transition(source, dest, p_src, p_dst, v0.vec);
    double r = source.radius();
    Vector x = exp_map(source, v0).coords;
    for (int j = 0; j < source.dimension(); ++j) {
      Vector dx = sphere_exp_derivative(r, p_src.coords, v0.vec, src_frame.col(j));
      Vector dlog = sphere_log_derivative(r, p_dst.coords, x, dx);
      jac.col(j) = dest.frame_components(p_dst, dst_frame, dlog);
    }
    return FiberLinearMap{p_src, p_dst, jac};
  }
  // Conformal metrics have no closed-form exp; differentiate the transition
  // along each frame direction instead.
  for (int j = 0; j < source.dimension(); ++j) {
    Vector e = kFiberStep * src_frame.col(j);
    Vector plus = fiber_transition(source, dest, p_src, p_dst, v0.vec + e);
    Vector minus = fiber_transition(source, dest, p_src, p_dst, v0.vec - e);
    jac.col(j) = dest.frame_components(p_dst, dst_frame, plus - minus) /
                 (2.0 * kFiberStep);
  }
  return FiberLinearMap{p_src, p_dst, jac};
}

FiberLinearMap fiber_transition_derivative(const TargetManifold& m,
                                           const Point& p_src,
                                           const Point& p_dst,
                                           const TangentVector& v0) {
  return fiber_transition_derivative(m, m, p_src, p_dst, v0);
}

Vector apply(const TargetManifold& source, const TargetManifold& dest,
             const FiberLinearMap& map, const Vector& v) {
  Matrix src_frame = source.orthonormal_frame(map.source_base);
  Matrix dst_frame = dest.orthonormal_frame(map.target_base);
  Vector c = source.frame_components(map.source_base, src_frame, v);
  return dst_frame * (map.matrix * c);
}

}  // namespace mapcalc
