#include "mapcalc/taylor.hpp"

#include "mapcalc/errors.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include <cmath>

namespace mapcalc {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// int_0^1 w(t) (D^r f(u + t h) - D^r f(u))(e, ..., e) dt
Vector remainder_integral(const TaylorData& data, const Vector& u, const Vector& h,
                          const Vector& e) {
  const int r = data.order;
  Vector at_u = data.derivative_along(u, e, r);
  Vector acc = Vector::Zero(at_u.size());
  for (auto [t, w] : gauss_legendre_32()) {
    double weight = std::pow(1.0 - t, r - 1) / factorial(r - 1);
    acc += (w * weight) * (data.derivative_along(u + t * h, e, r) - at_u);
  }
  return acc;
}

void check(const TaylorData& data, const Vector& u, const Vector& h) {
  if (data.order < 1) throw InvalidArgument("Taylor order must be at least 1");
  if (u.size() != data.domain_dim || h.size() != data.domain_dim)
    throw InvalidArgument("point and displacement must match the domain dimension");
  if (!data.in_thickening(u, h))
    throw ThickeningViolated("(u, h) lies outside the thickening of U");
}

}  // namespace

const std::vector<std::pair<double, double>>& gauss_legendre_32() {
  static const std::vector<std::pair<double, double>> rule = [] {
    const int n = 32;
    std::vector<std::pair<double, double>> out;
    for (double x : boost::math::legendre_p_zeros<double>(n)) {
      double dp = boost::math::legendre_p_prime<double>(n, x);
      double w = 2.0 / ((1.0 - x * x) * dp * dp);
      out.emplace_back(0.5 * (1.0 - x), 0.5 * w);
      out.emplace_back(0.5 * (1.0 + x), 0.5 * w);
    }
    return out;
  }();
  return rule;
}

bool TaylorData::in_thickening(const Vector& u, const Vector& h) const {
  return in_domain(u) && in_domain(u + h);
}

TaylorData TaylorData::scalar(int order, double lower, double upper,
                              std::vector<std::function<double(double)>> derivatives) {
  if (static_cast<int>(derivatives.size()) < order + 1)
    throw InvalidArgument("scalar Taylor data needs f and f' .. f^(r)");
  TaylorData d;
  d.order = order;
  d.domain_dim = 1;
  d.in_domain = [lower, upper](const Vector& u) { return u[0] > lower && u[0] < upper; };
  d.value = [derivatives](const Vector& u) {
    Vector v(1);
    v[0] = derivatives[0](u[0]);
    return v;
  };
  d.derivative_along = [derivatives](const Vector& u, const Vector& h, int i) {
    Vector v(1);
    v[0] = derivatives[static_cast<std::size_t>(i)](u[0]) * std::pow(h[0], i);
    return v;
  };
  return d;
}

Vector taylor_remainder(const TaylorData& data, const Vector& u, const Vector& h) {
  check(data, u, h);
  return remainder_integral(data, u, h, h);
}

Vector taylor_remainder_form(const TaylorData& data, double u, double h) {
  if (data.domain_dim != 1) throw InvalidArgument("remainder form needs d = 1");
  Vector uu(1), hh(1), one(1);
  uu[0] = u;
  hh[0] = h;
  one[0] = 1.0;
  check(data, uu, hh);
  return remainder_integral(data, uu, hh, one);
}

double taylor_identity_residual(const TaylorData& data, const Vector& u, const Vector& h) {
  Vector rhs = taylor_remainder(data, u, h);
  Vector lhs = data.value(u + h) - data.value(u);
  for (int i = 1; i <= data.order; ++i)
    lhs -= data.derivative_along(u, h, i) / factorial(i);
  return (lhs - rhs).norm();
}

}  // namespace mapcalc
