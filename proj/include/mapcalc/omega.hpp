#pragma once

#include "mapcalc/atlas.hpp"
#include "mapcalc/local_function.hpp"

#include <functional>
#include <string>

namespace mapcalc {

/// A kernel g : closure(U) x closure(V) -> R^n for the composition operator
/// Omega_g(f) = g(., f(.)), with U an interval and V a box (hence convex).
/// `fiber_derivative(x, y)` is the n x m matrix D_2 g(x, y) in closed form.
struct OmegaKernel {
  std::string name;
  double base_lower = 0.0;
  double base_upper = 1.0;
  Box fiber_box;
  int value_dim = 1;
  std::function<Vector(double x, const Vector& y)> value;
  std::function<Matrix(double x, const Vector& y)> fiber_derivative;

  int fiber_dim() const { return static_cast<int>(fiber_box.lower.size()); }

  /// g(x, y) = y^2 on [a, b] x [lo, hi].
  static OmegaKernel square(double a, double b, double lo, double hi);
  /// g(x, y) = sin(x) y, linear in the fiber.
  static OmegaKernel sine_linear(double a, double b, double lo, double hi);
  /// g(x, y) = e^y.
  static OmegaKernel exponential(double a, double b, double lo, double hi);
};

/// x -> g(x, f(x)) on every node of f's grid. Throws FiberBoxViolated when
/// f leaves the fiber box on the closed base interval, and InvalidArgument
/// when f's grid does not span the base interval.
LocalFunction omega_apply(const OmegaKernel& kernel, const LocalFunction& f);

/// x -> D_2 g(x, f(x)) h(x).
LocalFunction omega_derivative(const OmegaKernel& kernel, const LocalFunction& f,
                               const LocalFunction& h);

}  // namespace mapcalc
