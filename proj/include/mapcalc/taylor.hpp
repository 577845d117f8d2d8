#pragma once

#include "mapcalc/manifold.hpp"

#include <functional>

namespace mapcalc {

/// A C^r map f : U -> R^n on an open convex U in R^d, with its derivatives
/// along a displacement in closed form: derivative_along(u, h, i) is
/// D^i f(u)(h, ..., h). The thickening of U is the set of (u, h) with the
/// whole segment u + [0, 1] h in U, which for convex U means u and u + h.
struct TaylorData {
  int order = 1;
  int domain_dim = 1;
  std::function<bool(const Vector&)> in_domain;
  std::function<Vector(const Vector&)> value;
  std::function<Vector(const Vector& u, const Vector& h, int i)> derivative_along;

  bool in_thickening(const Vector& u, const Vector& h) const;

  /// Scalar f on an open interval from f and its derivatives f^(i),
  /// i = 1 .. order.
  static TaylorData scalar(int order, double lower, double upper,
                           std::vector<std::function<double(double)>> derivatives);
};

/// R(u, h) h^r = int_0^1 (1 - t)^(r - 1) / (r - 1)! (D^r f(u + t h) - D^r f(u)) h^r dt
/// by 32-node Gauss-Legendre quadrature. Throws ThickeningViolated.
Vector taylor_remainder(const TaylorData& data, const Vector& u, const Vector& h);

/// For d = 1: the r-linear form R(u, h) evaluated on (1, ..., 1).
Vector taylor_remainder_form(const TaylorData& data, double u, double h);

/// |f(u + h) - f(u) - sum_{i <= r} D^i f(u) h^i / i! - R(u, h) h^r|.
double taylor_identity_residual(const TaylorData& data, const Vector& u, const Vector& h);

/// Nodes and weights of the 32-point Gauss-Legendre rule on [0, 1].
const std::vector<std::pair<double, double>>& gauss_legendre_32();

}  // namespace mapcalc
