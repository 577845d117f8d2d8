#include "mapcalc/omega.hpp"

#include "mapcalc/errors.hpp"

#include <cmath>

namespace mapcalc {

namespace {

Box interval_box(double lo, double hi) {
  Box b{Vector(1), Vector(1)};
  b.lower[0] = lo;
  b.upper[0] = hi;
  return b;
}

Vector scalar(double v) {
  Vector out(1);
  out[0] = v;
  return out;
}

Matrix one_by_one(double v) {
  Matrix out(1, 1);
  out(0, 0) = v;
  return out;
}

void check_domain(const OmegaKernel& kernel, const LocalFunction& f) {
  const LocalGrid& g = f.grid();
  double tol = 1e-12 * std::max(1.0, std::abs(kernel.base_upper - kernel.base_lower));
  if (std::abs(g.lower - kernel.base_lower) > tol || std::abs(g.upper - kernel.base_upper) > tol)
    throw InvalidArgument("function grid does not span the kernel's base interval");
  if (f.dim() != kernel.fiber_dim())
    throw InvalidArgument("function dimension differs from the fiber dimension");
  for (int i = g.first_interior(); i <= g.last_interior(); ++i) {
    if (!kernel.fiber_box.contains(f.values().col(i)))
      throw FiberBoxViolated("f(" + std::to_string(g.x(i)) +
                             ") leaves the fiber box of kernel " + kernel.name);
  }
}

}  // namespace

OmegaKernel OmegaKernel::square(double a, double b, double lo, double hi) {
  return {"y^2", a, b, interval_box(lo, hi), 1,
          [](double, const Vector& y) { return scalar(y[0] * y[0]); },
          [](double, const Vector& y) { return one_by_one(2.0 * y[0]); }};
}

OmegaKernel OmegaKernel::sine_linear(double a, double b, double lo, double hi) {
  return {"sin(x)y", a, b, interval_box(lo, hi), 1,
          [](double x, const Vector& y) { return scalar(std::sin(x) * y[0]); },
          [](double x, const Vector&) { return one_by_one(std::sin(x)); }};
}

OmegaKernel OmegaKernel::exponential(double a, double b, double lo, double hi) {
  return {"e^y", a, b, interval_box(lo, hi), 1,
          [](double, const Vector& y) { return scalar(std::exp(y[0])); },
          [](double, const Vector& y) { return one_by_one(std::exp(y[0])); }};
}

LocalFunction omega_apply(const OmegaKernel& kernel, const LocalFunction& f) {
  check_domain(kernel, f);
  const LocalGrid& g = f.grid();
  Matrix out(kernel.value_dim, g.node_count());
  for (int i = 0; i < g.node_count(); ++i)
    out.col(i) = kernel.value(g.x(i), f.values().col(i));
  return LocalFunction(g, std::move(out));
}

LocalFunction omega_derivative(const OmegaKernel& kernel, const LocalFunction& f,
                               const LocalFunction& h) {
  check_domain(kernel, f);
  const LocalGrid& g = f.grid();
  if (!(h.grid() == g) || h.dim() != f.dim())
    throw InvalidArgument("direction lives on a different grid");
  Matrix out(kernel.value_dim, g.node_count());
  for (int i = 0; i < g.node_count(); ++i)
    out.col(i) = kernel.fiber_derivative(g.x(i), f.values().col(i)) * h.values().col(i);
  return LocalFunction(g, std::move(out));
}

}  // namespace mapcalc
