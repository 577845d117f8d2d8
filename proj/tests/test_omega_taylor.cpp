#include "mapcalc/errors.hpp"
#include "mapcalc/omega.hpp"
#include "mapcalc/random_fields.hpp"
#include "mapcalc/taylor.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace mapcalc;

namespace {

constexpr double kPi = std::numbers::pi;

Vector scalar(double x) {
  Vector v(1);
  v[0] = x;
  return v;
}

Box interval(double lo, double hi) { return Box{scalar(lo), scalar(hi)}; }

OmegaKernel identity_kernel(double a, double b) {
  OmegaKernel k;
  k.name = "y";
  k.base_lower = a;
  k.base_upper = b;
  k.fiber_box = interval(-10, 10);
  k.value = [](double, const Vector& y) { return y; };
  k.fiber_derivative = [](double, const Vector&) { return Matrix::Identity(1, 1); };
  return k;
}

// Random trigonometric polynomial with values in [-amp, amp].
LocalFunction random_trig(const LocalGrid& grid, double amp, Rng& rng) {
  double a[3], b[3];
  double total = 0.0;
  for (int j = 0; j < 3; ++j) {
    a[j] = uniform(rng, -1, 1);
    b[j] = uniform(rng, -1, 1);
    total += std::abs(a[j]) + std::abs(b[j]);
  }
  double scale = amp / total;
  return LocalFunction::sample_scalar(grid, [=](double x) {
    double v = 0.0;
    for (int j = 0; j < 3; ++j) v += a[j] * std::cos((j + 1) * x) + b[j] * std::sin((j + 1) * x);
    return scale * v;
  });
}

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

}  // namespace

TEST(LocalFunction, DerivativesOfSine) {
  LocalGrid grid{0.0, 2 * kPi, 256, 3};
  LocalFunction f = LocalFunction::sample_scalar(grid, [](double x) { return std::sin(x); });
  EXPECT_NEAR(cr_norm(f, 0), 1.0, 1e-12);
  EXPECT_NEAR(cr_norm(f, 2), 1.0, 1e-7);
  Matrix d1 = f.derivative(1);
  ASSERT_EQ(d1.cols(), grid.intervals + 1);
  for (int i = 0; i <= grid.intervals; i += 17)
    EXPECT_NEAR(d1(0, i), std::cos(grid.x(grid.first_interior() + i)), 5e-8);
}

TEST(OmegaApply, IdentityKernelReturnsF) {
  Rng rng(1);
  LocalGrid grid{0.0, 2 * kPi, 128, 3};
  LocalFunction f = random_trig(grid, 1.0, rng);
  EXPECT_EQ(omega_apply(identity_kernel(0, 2 * kPi), f).values(), f.values());
}

TEST(OmegaApply, SquareKernelGivesSineSquared) {
  LocalGrid grid{0.0, 2 * kPi, 128, 3};
  LocalFunction f = LocalFunction::sample_scalar(grid, [](double x) { return std::sin(x); });
  LocalFunction out = omega_apply(OmegaKernel::square(0, 2 * kPi, -1.5, 1.5), f);
  for (int i = 0; i < grid.node_count(); ++i)
    EXPECT_EQ(out.values()(0, i), std::sin(grid.x(i)) * std::sin(grid.x(i)));
}

TEST(OmegaApply, SineLinearMatchesPointwiseEvaluation) {
  Rng rng(2);
  LocalGrid grid{0.0, 2 * kPi, 128, 3};
  for (int t = 0; t < 10; ++t) {
    double c[4];
    for (double& x : c) x = uniform(rng, -0.25, 0.25);
    auto poly = [&](double x) {
      double s = x / (2 * kPi);
      return c[0] + c[1] * s + c[2] * s * s + c[3] * s * s * s;
    };
    LocalFunction f = LocalFunction::sample_scalar(grid, poly);
    LocalFunction out = omega_apply(OmegaKernel::sine_linear(0, 2 * kPi, -1, 1), f);
    for (int i = 0; i < grid.node_count(); ++i)
      EXPECT_NEAR(out.values()(0, i), std::sin(grid.x(i)) * poly(grid.x(i)), 1e-14);
  }
}

TEST(OmegaApply, FiberBoxAndDomainAreChecked) {
  LocalGrid grid{0.0, 2 * kPi, 64, 3};
  LocalFunction f = LocalFunction::sample_scalar(grid, [](double x) { return 2 * std::sin(x); });
  EXPECT_THROW(omega_apply(OmegaKernel::exponential(0, 2 * kPi, -1, 1), f), FiberBoxViolated);
  EXPECT_THROW(omega_derivative(OmegaKernel::exponential(0, 2 * kPi, -1, 1), f, f),
               FiberBoxViolated);
  EXPECT_THROW(omega_apply(OmegaKernel::exponential(0, 1, -3, 3), f), InvalidArgument);
}

TEST(OmegaDerivative, ClosedFormCases) {
  Rng rng(3);
  LocalGrid grid{0.0, 2 * kPi, 128, 3};
  LocalFunction f = random_trig(grid, 0.9, rng), h = random_trig(grid, 1.0, rng);
  LocalFunction sq = omega_derivative(OmegaKernel::square(0, 2 * kPi, -1, 1), f, h);
  LocalFunction lin = omega_derivative(OmegaKernel::sine_linear(0, 2 * kPi, -1, 1), f, h);
  LocalFunction lin0 = omega_derivative(OmegaKernel::sine_linear(0, 2 * kPi, -1, 1), f * 0.0, h);
  for (int i = 0; i < grid.node_count(); ++i) {
    double fi = f.values()(0, i), hi = h.values()(0, i);
    EXPECT_NEAR(sq.values()(0, i), 2 * fi * hi, 1e-15);
    EXPECT_EQ(lin.values()(0, i), std::sin(grid.x(i)) * hi);
    EXPECT_EQ(lin0.values()(0, i), lin.values()(0, i));
  }
}

TEST(OmegaDerivative, MatchesFunctionSpaceDifferences) {
  Rng rng(4);
  LocalGrid grid{0.0, 2 * kPi, 256, 3};
  const double eps = 1e-4;
  for (const OmegaKernel& k :
       {OmegaKernel::square(0, 2 * kPi, -1, 1), OmegaKernel::sine_linear(0, 2 * kPi, -1, 1),
        OmegaKernel::exponential(0, 2 * kPi, -1, 1)}) {
    for (int t = 0; t < 5; ++t) {
      LocalFunction f = random_trig(grid, 0.8, rng), h = random_trig(grid, 1.0, rng);
      LocalFunction fd = (omega_apply(k, f + h * eps) - omega_apply(k, f - h * eps)) *
                         (1.0 / (2 * eps));
      LocalFunction d = omega_derivative(k, f, h);
      for (int r = 0; r <= 2; ++r) EXPECT_LT(cr_norm(d - fd, r), 1e-5) << k.name << " r=" << r;
    }
  }
}

TEST(GaussLegendre, IntegratesHighDegreePolynomials) {
  const auto& rule = gauss_legendre_32();
  ASSERT_EQ(rule.size(), 32u);
  double sum = 0.0;
  for (auto [t, w] : rule) {
    EXPECT_GT(t, 0.0);
    EXPECT_LT(t, 1.0);
    sum += w;
  }
  EXPECT_NEAR(sum, 1.0, 1e-14);
  for (int deg : {1, 7, 30, 63}) {
    double q = 0.0;
    for (auto [t, w] : rule) q += w * std::pow(t, deg);
    EXPECT_NEAR(q, 1.0 / (deg + 1), 1e-14) << deg;
  }
}

TEST(Taylor, RemainderVanishesAtZeroDisplacement) {
  TaylorData d = TaylorData::scalar(
      2, -1, 1,
      {[](double u) { return std::sin(u); }, [](double u) { return std::cos(u); },
       [](double u) { return -std::sin(u); }});
  for (double u : {-0.7, 0.0, 0.4}) {
    EXPECT_EQ(taylor_remainder(d, scalar(u), scalar(0.0))[0], 0.0);
    EXPECT_EQ(taylor_remainder_form(d, u, 0.0)[0], 0.0);
  }
}

TEST(Taylor, QuadraticRemainderIsH) {
  TaylorData d = TaylorData::scalar(
      1, -5, 5,
      {[](double u) { return u * u; }, [](double u) { return 2 * u; }, [](double) { return 2.0; }});
  for (double u : {-1.0, 0.3, 2.0})
    for (double h : {-0.5, 0.1, 1.7}) {
      EXPECT_NEAR(taylor_remainder_form(d, u, h)[0], h, 1e-12);
      EXPECT_NEAR(taylor_remainder(d, scalar(u), scalar(h))[0], h * h, 1e-12);
    }
}

TEST(Taylor, IdentityHoldsForAnalyticFunctions) {
  TaylorData sine = TaylorData::scalar(
      2, -10, 10,
      {[](double u) { return std::sin(u); }, [](double u) { return std::cos(u); },
       [](double u) { return -std::sin(u); }});
  EXPECT_LT(taylor_identity_residual(sine, scalar(0.3), scalar(0.2)), 1e-10);
  // Direct evaluation of both sides.
  double lhs = std::sin(0.5) - std::sin(0.3) - std::cos(0.3) * 0.2 + std::sin(0.3) * 0.02;
  EXPECT_NEAR(taylor_remainder(sine, scalar(0.3), scalar(0.2))[0], lhs, 1e-14);

  Rng rng(5);
  for (int r = 1; r <= 3; ++r) {
    double a = 1.3;
    std::vector<std::function<double(double)>> ds;
    for (int i = 0; i <= r; ++i)
      ds.push_back([a, i](double u) { return std::pow(a, i) * std::exp(a * u); });
    TaylorData e = TaylorData::scalar(r, -2, 2, ds);
    for (int t = 0; t < 20; ++t) {
      double u = uniform(rng, -1.5, 1.5), h = uniform(rng, -0.45, 0.45);
      EXPECT_LT(taylor_identity_residual(e, scalar(u), scalar(h)), 1e-10);
      // Closed form of R(u, h) h^r for exp(a u).
      double poly = 0.0;
      for (int i = 0; i <= r; ++i) poly += std::pow(a * h, i) / factorial(i);
      double exact = std::exp(a * u) * (std::exp(a * h) - poly);
      EXPECT_NEAR(taylor_remainder(e, scalar(u), scalar(h))[0], exact, 1e-12);
    }
  }
}

TEST(Taylor, VectorValuedOnAPlaneDomain) {
  // f(u) = (exp(a.u), (b.u)^3) on the open unit disc, r = 3.
  Vector a(2), b(2);
  a << 0.7, -0.4;
  b << 1.1, 0.5;
  TaylorData d;
  d.order = 3;
  d.domain_dim = 2;
  d.in_domain = [](const Vector& u) { return u.norm() < 1.0; };
  d.value = [=](const Vector& u) {
    Vector v(2);
    v << std::exp(a.dot(u)), std::pow(b.dot(u), 3);
    return v;
  };
  d.derivative_along = [=](const Vector& u, const Vector& h, int i) {
    Vector v(2);
    double bu = b.dot(u), bh = b.dot(h);
    double cubic = i == 1 ? 3 * bu * bu * bh : i == 2 ? 6 * bu * bh * bh : 6 * bh * bh * bh;
    v << std::pow(a.dot(h), i) * std::exp(a.dot(u)), cubic;
    return v;
  };
  Rng rng(6);
  for (int t = 0; t < 50; ++t) {
    Vector u(2), h(2);
    u << uniform(rng, -0.5, 0.5), uniform(rng, -0.5, 0.5);
    h << uniform(rng, -0.3, 0.3), uniform(rng, -0.3, 0.3);
    EXPECT_LT(taylor_identity_residual(d, u, h), 1e-10);
    // The cubic component has constant third derivative: no remainder.
    EXPECT_NEAR(taylor_remainder(d, u, h)[1], 0.0, 1e-14);
  }
}

TEST(Taylor, ThickeningClauses) {
  TaylorData d = TaylorData::scalar(
      1, 0, 1, {[](double u) { return u; }, [](double) { return 1.0; }});
  Rng rng(7);
  for (int t = 0; t < 1000; ++t) {
    Vector u = scalar(uniform(rng, -0.5, 1.5)), h = scalar(uniform(rng, -1.5, 1.5));
    // Contains U x {0}.
    EXPECT_EQ(d.in_thickening(u, scalar(0.0)), d.in_domain(u));
    if (d.in_thickening(u, h)) {
      // Projects into U and is closed under shrinking the segment.
      EXPECT_TRUE(d.in_domain(u));
      EXPECT_TRUE(d.in_thickening(u, h * uniform(rng, 0.0, 1.0)));
    }
  }
  EXPECT_THROW(taylor_remainder(d, scalar(0.5), scalar(0.6)), ThickeningViolated);
  EXPECT_THROW(taylor_remainder(d, scalar(1.5), scalar(0.0)), ThickeningViolated);
}
