#include "mapcalc/suites.hpp"

#include "mapcalc/errors.hpp"
#include "mapcalc/formulas.hpp"
#include "mapcalc/io.hpp"
#include "mapcalc/omega.hpp"
#include "mapcalc/parallel.hpp"
#include "mapcalc/random_fields.hpp"
#include "mapcalc/taylor.hpp"
#include "mapcalc/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace mapcalc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFdStep = 1e-4;

using CheckFn = std::function<CheckResult(Rng&)>;

CheckResult make_check(std::string name, double residual, double tolerance,
                       std::string anchor) {
  bool pass = std::isfinite(residual) && residual <= tolerance;
  return {std::move(name), residual, tolerance, pass, std::move(anchor)};
}

// 0 when fn throws E, 1 otherwise.
template <class E, class F>
double throws(F&& fn) {
  try {
    fn();
  } catch (const E&) {
    return 0.0;
  }
  return 1.0;
}

std::vector<CheckResult> run_checks(const ExperimentConfig& config,
                                    const std::vector<CheckFn>& checks) {
  std::vector<std::optional<CheckResult>> results(checks.size());
  parallel_for(static_cast<int>(checks.size()), [&](int i) {
    Rng rng(config.seed * 1000003ULL + static_cast<std::uint64_t>(i));
    results[static_cast<std::size_t>(i)] = checks[static_cast<std::size_t>(i)](rng);
  });
  std::vector<CheckResult> out;
  for (auto& r : results) out.push_back(std::move(*r));
  return out;
}

TargetManifold sphere_of(const ExperimentConfig& c) {
  return TargetManifold::round_sphere(c.sphere_radius);
}

TargetManifold torus_of(const ExperimentConfig& c) {
  return TargetManifold::flat_torus(c.torus_periods);
}

Vector vec3(const Eigen::Vector3d& v) {
  Vector out(3);
  out << v[0], v[1], v[2];
  return out;
}

SampledMap rotated_circle(const TargetManifold& m, int resolution, const Eigen::Matrix3d& rot) {
  double r = m.radius();
  MapFormula f{"great_circle", json::object(), [r, rot](const Vector& a) {
                 return vec3(r * (rot * Eigen::Vector3d(std::cos(a[0]), std::sin(a[0]), 0.0)));
               }};
  return sample_map(DomainAtlas::circle(), m, f, resolution);
}

SampledMap torus_loop(const TargetManifold& m, int resolution, const Vector& offset,
                      const Vector& winding, const Vector& amplitude, int mode) {
  MapFormula f{"torus_linear", json::object(), [=](const Vector& a) {
                 return Vector(offset + winding * a[0] + amplitude * std::sin(mode * a[0]));
               }};
  return sample_map(DomainAtlas::circle(), m, f, resolution);
}

// A great circle in random position, bent by a random smooth section.
SampledMap random_sphere_map(const TargetManifold& m, int resolution, Rng& rng) {
  MapPtr circle = share(rotated_circle(m, resolution, random_rotation(rng)));
  double bound = 0.3 * m.radius();
  return chart_inverse(random_section(circle, bound, uniform(rng, 0.0, 0.9), rng));
}

SampledMap random_torus_map(const TargetManifold& m, int resolution, Rng& rng) {
  const int dim = m.dimension();
  Vector offset(dim), winding = Vector::Zero(dim), amplitude = Vector::Zero(dim);
  for (int d = 0; d < dim; ++d)
    offset[d] = uniform(rng, 0.0, m.periods()[static_cast<std::size_t>(d)]);
  winding[0] = 1.0;
  amplitude[dim - 1] = uniform(rng, 0.0, 0.5);
  int mode = 1 + static_cast<int>(uniform(rng, 0.0, 3.0));
  return torus_loop(m, resolution, offset, winding, amplitude, mode);
}

double max_node_distance(const SampledMap& a, const SampledMap& b) {
  double sup = 0.0;
  for (int c = 0; c < a.atlas().chart_count(); ++c) {
    for (int node = 0; node < a.grid(c).node_count(); ++node)
      sup = std::max(sup, distance(a.target(), a.value(c, node), b.value(c, node)));
  }
  return sup;
}

double delta_for(const ExperimentConfig& config, const SampledMap& f) {
  return config.delta ? *config.delta : default_delta(f);
}

double relative(double num, double den) { return den > 0.0 ? num / den : num; }

// (transition(s0 + eps s) - transition(s0 - eps s)) / (2 eps)
PullbackSection transition_difference(const MapPtr& g, const PullbackSection& s0,
                                      const PullbackSection& s, double eps) {
  PullbackSection plus = transition(g, (s0 + s * eps).with_bound(s0.bound()));
  PullbackSection minus = transition(g, (s0 - s * eps).with_bound(s0.bound()));
  return (plus - minus) * (1.0 / (2.0 * eps));
}

// ---------------------------------------------------------------------------

std::vector<CheckFn> chart_checks(const ExperimentConfig& cfg) {
  const int n = cfg.resolution;
  std::vector<CheckFn> checks;
  checks.push_back([=](Rng& rng) {
    MapPtr f = share(random_sphere_map(sphere_of(cfg), n, rng));
    double res = chart_forward(f, *f, delta_for(cfg, *f)).sup_norm();
    return make_check("chart_forward(f, f) = 0", res, 0.0, "phi_f(f) is the zero section");
  });
  checks.push_back([=](Rng& rng) {
    TargetManifold m = sphere_of(cfg);
    Point p0 = exp_map(m, {m.make_point(vec3(Eigen::Vector3d::UnitZ() * m.radius())), vec3({0.3, -0.2, 0.0})});
    Vector v = m.project_to_tangent(p0, vec3({uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1)}));
    MapFormula fp{"constant", {}, [p0](const Vector&) { return p0.coords; }};
    MapPtr f = share(sample_map(DomainAtlas::circle(), m, fp, n));
    double delta = delta_for(cfg, *f);
    Point q0 = exp_map(m, {p0, v * (0.5 * delta / metric_norm(m, {p0, v}))});
    MapFormula fq{"constant", {}, [q0](const Vector&) { return q0.coords; }};
    PullbackSection s = chart_forward(f, sample_map(DomainAtlas::circle(), m, fq, n), delta);
    Vector expected = log_map(m, p0, q0).vec;
    double res = 0.0;
    for (int c = 0; c < f->atlas().chart_count(); ++c)
      for (int node = 0; node < f->grid(c).node_count(); ++node)
        res = std::max(res, (s.chart_vectors(c).col(node) - expected).norm());
    return make_check("chart_forward of constant maps is log_{p0} q0", res, 1e-15,
                      "phi_f(g)(p) = exp_{f(p)}^-1 g(p)");
  });
  checks.push_back([=](Rng&) {
    TargetManifold m = sphere_of(cfg);
    MapPtr f = share(rotated_circle(m, n, Eigen::Matrix3d::Identity()));
    SampledMap g = rotated_circle(m, n, -Eigen::Matrix3d::Identity());
    double res = throws<WellDefinednessViolated>(
        [&] { chart_forward(f, g, 0.5 * kPi * m.radius()); });
    return make_check("antipodal loop is rejected at delta = pi/2", res, 0.0,
                      "well-definedness needs d(g(p), f(p)) < delta");
  });
  auto round_trip = [=](bool sphere, int order, double tol) {
    return [=](Rng& rng) {
      TargetManifold m = sphere ? sphere_of(cfg) : torus_of(cfg);
      double worst = 0.0;
      for (int t = 0; t < cfg.trials; ++t) {
        MapPtr f = share(sphere ? random_sphere_map(m, n, rng) : random_torus_map(m, n, rng));
        double delta = delta_for(cfg, *f);
        SampledMap g = chart_inverse(random_section(f, delta, uniform(rng, 0.1, 0.9), rng));
        SampledMap back = chart_inverse(chart_forward(f, g, delta));
        worst = std::max(worst, ck_distance(g, back, order));
      }
      return make_check(std::string("round trip phi_f^-1 phi_f (") +
                            (sphere ? "sphere" : "torus") + ", k=" + std::to_string(order) + ")",
                        worst, tol, "phi_f^-1(s)(p) = exp_{f(p)} s(p)");
    };
  };
  checks.push_back(round_trip(true, 0, 1e-9));
  checks.push_back(round_trip(true, 2, 1e-5));
  checks.push_back(round_trip(false, 0, 1e-9));
  checks.push_back(round_trip(false, 2, 1e-5));
  checks.push_back([=](Rng& rng) {
    TargetManifold m = sphere_of(cfg);
    double worst = 0.0;
    for (int t = 0; t < cfg.trials; ++t) {
      MapPtr f = share(random_sphere_map(m, n, rng));
      PullbackSection s = random_section(f, 0.3, uniform(rng, 0.1, 0.9), rng);
      PullbackSection back = chart_forward(f, chart_inverse(*f, s), s.bound());
      worst = std::max(worst, section_norm(back - s, 0).total);
    }
    return make_check("round trip phi_f phi_f^-1 (sphere, k=0)", worst, 1e-9,
                      "phi_f o phi_f^-1 = id on V_f");
  });
  checks.push_back([=](Rng&) {
    TargetManifold m = torus_of(cfg);
    Vector zero = Vector::Zero(2), w(2), shift(2);
    w << 1.0, 0.0;
    shift << 0.0, 0.2;
    MapPtr f = share(torus_loop(m, n, zero, w, zero, 1));
    PullbackSection s = PullbackSection::from_field(
        f, 0.25, [&](const Vector&, const Point&) { return shift; });
    SampledMap g = chart_inverse(s);
    SampledMap expected = torus_loop(m, n, shift, w, zero, 1);
    return make_check("torus: constant section (0, c) translates the loop",
                      max_node_distance(g, expected), 1e-14,
                      "flat exp is translation");
  });
  checks.push_back([=](Rng& rng) {
    TargetManifold m = sphere_of(cfg);
    Eigen::Matrix3d base = random_rotation(rng);
    Eigen::Vector3d axis = random_rotation(rng).col(0);
    SampledMap f = rotated_circle(m, n, base);
    SampledMap pushed = pushforward(TargetMap::sphere_rotation(m, axis, 0.3), f);
    Eigen::Matrix3d rot = Eigen::AngleAxisd(0.3, axis).toRotationMatrix();
    SampledMap expected = rotated_circle(m, n, rot * base);
    return make_check("pushforward by a rotation of 0.3 rad", max_node_distance(pushed, expected),
                      1e-12, "f -> g o f is C^r");
  });
  checks.push_back([=](Rng& rng) {
    TargetManifold m = torus_of(cfg);
    SampledMap f = random_torus_map(m, n, rng);
    Vector shift(2);
    shift << uniform(rng, -1, 1), uniform(rng, -1, 1);
    SampledMap pushed = pushforward(TargetMap::torus_translation(m, shift), f);
    SampledMap expected = build_map(f.atlas(), m, n, [&](int c, int node) {
      return m.reduce(f.value(c, node).coords + shift);
    });
    return make_check("pushforward by a torus translation", max_node_distance(pushed, expected),
                      1e-14, "f -> g o f is C^r");
  });
  checks.push_back([=](Rng& rng) {
    SampledMap f = random_sphere_map(sphere_of(cfg), n, rng);
    SampledMap pulled = pullback(DomainMap::identity(f.atlas()), f);
    return make_check("pullback by the identity", max_node_distance(pulled, f), 1e-9,
                      "f -> f o g is smooth");
  });
  checks.push_back([=](Rng&) {
    TargetManifold m = torus_of(cfg);
    Vector zero = Vector::Zero(2), w(2);
    w << 1.0, 0.0;
    SampledMap f = torus_loop(m, n, zero, w, zero, 1);
    SampledMap pulled = pullback(DomainMap::circle_cover(2), f);
    SampledMap expected = torus_loop(m, n, zero, w * 2.0, zero, 1);
    std::vector<long> wn = winding_numbers(pulled);
    double res = std::max(max_node_distance(pulled, expected),
                          static_cast<double>(std::abs(wn[0] - 2) + std::abs(wn[1])));
    return make_check("pullback by the double cover has winding (2, 0)", res, 1e-12,
                      "f -> f o g is smooth");
  });
  checks.push_back([=](Rng& rng) {
    TargetManifold m = torus_of(cfg);
    SampledMap f1 = random_torus_map(m, n, rng);
    SampledMap f2 = random_torus_map(m, n, rng);
    SampledMap sum = build_map(f1.atlas(), m, n, [&](int c, int node) {
      return m.reduce(f1.value(c, node).coords + f2.value(c, node).coords);
    });
    DomainMap shift = DomainMap::circle_shift(0.37);
    SampledMap p1 = pullback(shift, f1), p2 = pullback(shift, f2), ps = pullback(shift, sum);
    double res = 0.0;
    for (int c = 0; c < ps.atlas().chart_count(); ++c)
      for (int node = 0; node < ps.grid(c).node_count(); ++node)
        res = std::max(res, m.wrap(ps.value(c, node).coords - p1.value(c, node).coords -
                                   p2.value(c, node).coords)
                                .norm());
    return make_check("pullback is linear in chart representatives", res, 1e-10,
                      "alpha_g is linear and continuous");
  });
  return checks;
}

// ---------------------------------------------------------------------------

std::vector<CheckFn> topology_checks(const ExperimentConfig& cfg) {
  const int n = cfg.resolution;
  std::vector<CheckFn> checks;
  checks.push_back([=](Rng& rng) {
    SampledMap f = random_sphere_map(sphere_of(cfg), n, rng);
    return make_check("ck_distance(f, f) = 0", ck_distance(f, f, cfg.order), 0.0,
                      "N^k(f, ...) contains f");
  });
  for (int order : {0, 1}) {
    checks.push_back([=](Rng&) {
      TargetManifold m = torus_of(cfg);
      Vector zero = Vector::Zero(2), w(2), shift(2);
      w << 1.0, 0.0;
      shift << 0.01, 0.0;
      SampledMap f = torus_loop(m, n, zero, w, zero, 1);
      SampledMap g = torus_loop(m, n, shift, w, zero, 1);
      return make_check("ck_distance of a 0.01 shift, k=" + std::to_string(order),
                        std::abs(ck_distance(f, g, order) - 0.01), 1e-12,
                        "max over a finite cover is a neighbourhood basis");
    });
  }
  checks.push_back([=](Rng& rng) {
    TargetManifold m = sphere_of(cfg);
    double sym = 0.0, tri = 0.0;
    for (int t = 0; t < cfg.trials; ++t) {
      MapPtr f = share(random_sphere_map(m, n, rng));
      double delta = delta_for(cfg, *f);
      std::vector<TargetChart> charts = adapted_target_charts(*f);
      SampledMap g = chart_inverse(random_section(f, delta, 0.8, rng));
      SampledMap h = chart_inverse(random_section(f, delta, 0.8, rng));
      double fg = ck_distance(charts, *f, g, cfg.order);
      double gf = ck_distance(charts, g, *f, cfg.order);
      double gh = ck_distance(charts, g, h, cfg.order);
      double fh = ck_distance(charts, *f, h, cfg.order);
      sym = std::max(sym, std::abs(fg - gf));
      tri = std::max(tri, fh - fg - gh);
    }
    return make_check("ck_distance is a pseudometric", std::max(sym, tri), 1e-10,
                      "the topology is metrizable near f");
  });
  checks.push_back([=](Rng& rng) {
    TargetManifold m = sphere_of(cfg);
    double worst = 0.0;
    for (int t = 0; t < cfg.trials; ++t) {
      MapPtr f = share(random_sphere_map(m, n, rng));
      PullbackSection s = random_section(f, 1.0, 0.5, rng);
      PullbackSection u = random_section(f, 1.0, 0.5, rng);
      double a = uniform(rng, -3, 3);
      double ns = section_norm(s, cfg.order).total;
      double nu = section_norm(u, cfg.order).total;
      worst = std::max(worst, std::abs(section_norm(s * a, cfg.order).total - std::abs(a) * ns));
      worst = std::max(worst, section_norm(s + u, cfg.order).total - ns - nu);
    }
    return make_check("section_norm is a norm", worst, 1e-12, "C^k norm on sections");
  });
  checks.push_back([=](Rng& rng) {
    TargetManifold m = sphere_of(cfg);
    MapPtr f = share(random_sphere_map(m, n, rng));
    std::vector<TargetChart> charts = adapted_target_charts(*f);
    const Chart& c0 = f->atlas().chart(0);
    const Chart& c1 = f->atlas().chart(1);
    Box half{c1.compact.lower, 0.5 * (c1.compact.lower + c1.compact.upper)};
    std::vector<int> k1 = f->grid(1).nodes_in(c1.compact);
    std::vector<CkNeighborhood> elements{
        CkNeighborhood(*f, {{0, charts[0], c0.compact}}, 0.05, cfg.order),
        CkNeighborhood(*f, {{1, charts[1], half}}, 0.02, cfg.order),
        CkNeighborhood(*f, {{1, TargetChart::sphere_cap(m, f->value(1, k1[3 * k1.size() / 8]), 0.85 * kPi),
                             c1.compact}},
                       0.1, cfg.order)};
    PullbackSection s = random_section(f, delta_for(cfg, *f), 0.9, rng);
    // g_m = f perturbed by amplitude 1/m; membership must hold from some m on.
    const int last = 64;
    std::vector<int> first_inside(elements.size(), -1);
    bool eventually = true;
    for (int mm = 1; mm <= last; ++mm) {
      SampledMap g = chart_inverse(s * (1.0 / mm));
      for (std::size_t e = 0; e < elements.size(); ++e) {
        bool in = nbhd_contains(elements[e], g);
        if (in && first_inside[e] < 0) first_inside[e] = mm;
        if (!in && first_inside[e] >= 0) eventually = false;
      }
    }
    for (int v : first_inside) eventually = eventually && v > 0;
    return make_check("g_m -> f enters three subbasis elements", eventually ? 0.0 : 1.0, 0.0,
                      "the sets N^k(f, ...) form a subbasis");
  });
  checks.push_back([=](Rng& rng) {
    TargetManifold m = sphere_of(cfg);
    SampledMap f = random_sphere_map(m, n, rng);
    CkNeighborhood nbhd = CkNeighborhood::over_cover(f, cfg.epsilon, cfg.order);
    std::vector<Matrix> values;
    for (int c = 0; c < f.atlas().chart_count(); ++c) values.push_back(f.chart_values(c));
    std::vector<int> k_nodes = f.grid(0).nodes_in(f.atlas().chart(0).compact);
    // The antipode of the image of K's midpoint lies outside the cap V.
    int node = k_nodes[k_nodes.size() / 2];
    values[0].col(node) = -values[0].col(node);
    SampledMap g(f.atlas(), m, n, values);
    double res = (nbhd_contains(nbhd, f) ? 0.0 : 1.0) + (nbhd_contains(nbhd, g) ? 1.0 : 0.0);
    return make_check("membership: f inside, g leaving V outside", res, 0.0,
                      "g(K) inside V is part of the definition");
  });
  checks.push_back([=](Rng& rng) {
    LocalGrid grid{0.0, 2.0 * kPi, 256, 3};
    ScalarMap psi{"2y", {[](double y) { return 2.0 * y; }, [](double) { return 2.0; },
                         [](double) { return 0.0; }}};
    LocalFunction f1 = LocalFunction::sample_scalar(grid, [](double x) { return std::sin(x); });
    std::vector<LocalFunction> samples;
    for (int t = 0; t < 100; ++t) {
      double a = uniform(rng, -0.3, 0.3), k = 1 + static_cast<int>(uniform(rng, 0, 4));
      samples.push_back(LocalFunction::sample_scalar(grid, [=](double x) {
        return 0.6 * std::sin(x) + a * std::cos(k * x);
      }));
    }
    CompositionProbeResult r = composition_bound_probe(psi, f1, samples, -1.0, 1.0, 2.0, 0);
    return make_check("composition probe, Lipschitz psi = 2y, k=0",
                      std::max(0.0, r.max_ratio - 2.0), 1e-9,
                      "|psi o f1 - psi o f2| <= C |f1 - f2| in C^k(K)");
  });
  checks.push_back([=](Rng& rng) {
    LocalGrid grid{0.0, 2.0 * kPi, 256, 3};
    ScalarMap psi{"y^2", {[](double y) { return y * y; }, [](double y) { return 2.0 * y; },
                          [](double) { return 2.0; }}};
    LocalFunction f1 = LocalFunction::sample_scalar(grid, [](double x) { return std::sin(x); });
    std::vector<LocalFunction> samples;
    for (int t = 0; t < 100; ++t) {
      double a = uniform(rng, -1, 1), b = uniform(rng, -1, 1);
      int k = 1 + static_cast<int>(uniform(rng, 0, 3));
      LocalFunction q = LocalFunction::sample_scalar(grid, [=](double x) {
        return 0.5 * (a * std::cos(k * x) + b * std::sin(k * x));
      });
      double c = 0.9 * 0.5 / std::max(1e-12, cr_norm(q - f1, 1));
      c = std::min(c, 1.0);
      samples.push_back(f1 * (1.0 - c) + q * c);
    }
    CompositionProbeResult r = composition_bound_probe(psi, f1, samples, -1.0, 1.0, 0.5, 1);
    double res = std::isfinite(r.max_ratio) ? std::max(0.0, r.max_ratio - r.bound_witness)
                                            : std::numeric_limits<double>::infinity();
    if (!r.ladder_monotone) res = std::max(res, 1.0);
    return make_check("composition probe, psi = y^2, k=1, R=0.5", res, 0.0,
                      "C is non-decreasing in R");
  });
  return checks;
}

// ---------------------------------------------------------------------------

std::vector<CheckFn> omega_checks(const ExperimentConfig&) {
  std::vector<CheckFn> checks;
  const LocalGrid grid{0.0, 2.0 * kPi, 256, 3};
  const std::vector<OmegaKernel> kernels{OmegaKernel::square(0.0, 2.0 * kPi, -2.0, 2.0),
                                         OmegaKernel::sine_linear(0.0, 2.0 * kPi, -2.0, 2.0),
                                         OmegaKernel::exponential(0.0, 2.0 * kPi, -2.0, 2.0)};
  for (const OmegaKernel& kernel : kernels) {
    for (int r = 0; r <= 2; ++r) {
      checks.push_back([=](Rng& rng) {
        double a = uniform(rng, -0.5, 0.5), b = uniform(rng, -0.4, 0.4);
        double c = uniform(rng, -1, 1), d = uniform(rng, -1, 1);
        LocalFunction f = LocalFunction::sample_scalar(
            grid, [=](double x) { return a * std::sin(x) + b * std::cos(2.0 * x); });
        LocalFunction h = LocalFunction::sample_scalar(
            grid, [=](double x) { return c * std::cos(x) + d * std::sin(3.0 * x); });
        LocalFunction fd = (omega_apply(kernel, f + h * kFdStep) -
                            omega_apply(kernel, f - h * kFdStep)) *
                           (1.0 / (2.0 * kFdStep));
        double res = cr_norm(omega_derivative(kernel, f, h) - fd, r);
        return make_check("D Omega_g = A_1 o Omega_{D_2 g} for g = " + kernel.name +
                              ", r=" + std::to_string(r),
                          res, 1e-5, "D^i(Omega_g) = A_i o Omega_{D^i_2 g}");
      });
    }
  }
  checks.push_back([=](Rng&) {
    OmegaKernel k = OmegaKernel::square(0.0, 2.0 * kPi, -1.0, 1.0);
    LocalFunction f = LocalFunction::sample_scalar(grid, [](double x) { return 1.5 * std::sin(x); });
    double res = throws<FiberBoxViolated>([&] { omega_apply(k, f); });
    return make_check("f leaving the fiber box is rejected", res, 0.0,
                      "C^r(U, V) is open in C^r(U, R^m)");
  });
  return checks;
}

// ---------------------------------------------------------------------------

TaylorData sine_data(int order) {
  std::vector<std::function<double(double)>> d{
      [](double x) { return std::sin(x); }, [](double x) { return std::cos(x); },
      [](double x) { return -std::sin(x); }, [](double x) { return -std::cos(x); }};
  return TaylorData::scalar(order, -10.0, 10.0, d);
}

std::vector<CheckFn> taylor_checks(const ExperimentConfig&) {
  std::vector<CheckFn> checks;
  checks.push_back([](Rng& rng) {
    double res = 0.0;
    for (int r = 1; r <= 3; ++r) {
      Vector u(1), h = Vector::Zero(1);
      u[0] = uniform(rng, -2, 2);
      res = std::max(res, taylor_remainder(sine_data(r), u, h).norm());
      res = std::max(res, taylor_remainder_form(sine_data(r), u[0], 0.0).norm());
    }
    return make_check("R(u,0)=0", res, 0.0, "R(u, 0) = 0");
  });
  checks.push_back([](Rng& rng) {
    TaylorData q = TaylorData::scalar(
        1, -10.0, 10.0,
        {[](double x) { return x * x; }, [](double x) { return 2.0 * x; }});
    double res = 0.0;
    for (int t = 0; t < 20; ++t) {
      double u = uniform(rng, -3, 3), h = uniform(rng, -3, 3);
      res = std::max(res, std::abs(taylor_remainder_form(q, u, h)[0] - h));
    }
    return make_check("R(u,h) = h for f = u^2, r=1", res, 1e-12,
                      "f(u+h) = f(u) + sum phi_i(u) h^i / i! + R(u,h) h^r");
  });
  checks.push_back([](Rng&) {
    Vector u(1), h(1);
    u[0] = 0.3;
    h[0] = 0.2;
    return make_check("Taylor identity for sin, r=2, u=0.3, h=0.2",
                      taylor_identity_residual(sine_data(2), u, h), 1e-10,
                      "f(u+h) = f(u) + sum phi_i(u) h^i / i! + R(u,h) h^r");
  });
  checks.push_back([](Rng& rng) {
    // f(u) = exp(a . u) on the unit disc of R^2; D^i f(u)(h..h) = (a.h)^i f(u).
    Vector a(2);
    a << 0.7, -1.3;
    TaylorData d;
    d.order = 3;
    d.domain_dim = 2;
    d.in_domain = [](const Vector& u) { return u.norm() < 1.0; };
    d.value = [a](const Vector& u) {
      Vector v(1);
      v[0] = std::exp(a.dot(u));
      return v;
    };
    d.derivative_along = [a](const Vector& u, const Vector& h, int i) {
      Vector v(1);
      v[0] = std::pow(a.dot(h), i) * std::exp(a.dot(u));
      return v;
    };
    double res = 0.0;
    for (int t = 0; t < 20; ++t) {
      Vector u(2), h(2);
      u << uniform(rng, -0.4, 0.4), uniform(rng, -0.4, 0.4);
      h << uniform(rng, -0.4, 0.4), uniform(rng, -0.4, 0.4);
      res = std::max(res, taylor_identity_residual(d, u, h));
    }
    return make_check("Taylor identity for exp(a.u) on the disc, r=3", res, 1e-10,
                      "f(u+h) = f(u) + sum phi_i(u) h^i / i! + R(u,h) h^r");
  });
  checks.push_back([](Rng&) {
    TaylorData d = TaylorData::scalar(1, 0.0, 1.0, {[](double x) { return x; },
                                                    [](double) { return 1.0; }});
    Vector u(1), h(1);
    u[0] = 0.5;
    h[0] = 0.7;
    double res = throws<ThickeningViolated>([&] { taylor_remainder(d, u, h); });
    return make_check("(u, h) outside the thickening is rejected", res, 0.0,
                      "a thickening of U");
  });
  return checks;
}

// ---------------------------------------------------------------------------

std::vector<CheckFn> transition_checks(const ExperimentConfig& cfg) {
  const int n = cfg.resolution;
  std::vector<CheckFn> checks;
  // Maps near f: f bent by a section of sup 0.05.
  auto neighbour = [](const MapPtr& f, Rng& rng) {
    return share(chart_inverse(random_section(f, 0.06, 0.05 / 0.06, rng)));
  };
  checks.push_back([=](Rng& rng) {
    MapPtr f = share(random_sphere_map(sphere_of(cfg), n, rng));
    PullbackSection s = random_section(f, 0.2, 0.9, rng);
    double res = (transition(f, s) - s).sup_norm();
    return make_check("transition(f -> f) is the identity", res, 1e-14,
                      "F(v) = (exp_{g(p)}^-1 o exp_{f(p)})(v)");
  });
  checks.push_back([=](Rng& rng) {
    TargetManifold m = torus_of(cfg);
    MapPtr f = share(random_torus_map(m, n, rng));
    MapPtr g = neighbour(f, rng);
    PullbackSection s = random_section(f, 0.2, 0.9, rng);
    PullbackSection out = transition(g, s);
    double res = 0.0;
    for (int c = 0; c < f->atlas().chart_count(); ++c)
      for (int node = 0; node < f->grid(c).node_count(); ++node) {
        Vector expected = m.wrap(f->value(c, node).coords + s.chart_vectors(c).col(node) -
                                 g->value(c, node).coords);
        res = std::max(res, (out.chart_vectors(c).col(node) - expected).norm());
      }
    return make_check("torus transition is the shortest translation", res, 1e-14,
                      "F(v) = (exp_{g(p)}^-1 o exp_{f(p)})(v)");
  });
  checks.push_back([=](Rng& rng) {
    double res = 0.0;
    for (int t = 0; t < cfg.trials; ++t) {
      MapPtr f = share(random_sphere_map(sphere_of(cfg), n, rng));
      MapPtr g = neighbour(f, rng);
      PullbackSection s = random_section(f, 0.2, 0.9, rng);
      PullbackSection direct = chart_forward(g, chart_inverse(s), 0.3);
      res = std::max(res, (transition(g, s) - direct).sup_norm());
    }
    return make_check("transition = phi_g o phi_f^-1 (sphere)", res, 1e-12,
                      "F(v) = (exp_{g(p)}^-1 o exp_{f(p)})(v)");
  });
  checks.push_back([=](Rng& rng) {
    double res = 0.0;
    for (int t = 0; t < cfg.trials; ++t) {
      MapPtr f = share(random_sphere_map(sphere_of(cfg), n, rng));
      MapPtr g = neighbour(f, rng);
      MapPtr h = neighbour(f, rng);
      PullbackSection s = random_section(f, 0.2, 0.9, rng);
      PullbackSection two = transition(h, transition(g, s));
      res = std::max(res, (two - transition(h, s)).sup_norm());
    }
    return make_check("cocycle: (g -> h) o (f -> g) = (f -> h)", res, 1e-9,
                      "phi_h o phi_g^-1 o phi_g o phi_f^-1 = phi_h o phi_f^-1");
  });
  checks.push_back([=](Rng& rng) {
    double res = 0.0;
    for (int t = 0; t < cfg.trials; ++t) {
      MapPtr f = share(random_sphere_map(sphere_of(cfg), n, rng));
      MapPtr g = neighbour(f, rng);
      PullbackSection s0 = random_section(f, 0.2, 0.8, rng);
      PullbackSection s = random_section(f, 0.2, 0.8, rng);
      PullbackSection fd = transition_difference(g, s0, s, kFdStep);
      res = std::max(res, relative((transition_derivative(g, s0, s) - fd).sup_norm(), fd.sup_norm()));
    }
    return make_check("transition derivative vs finite differences (sphere)", res, 1e-5,
                      "D(phi_g o phi_f^-1)_{s0} s (p) = D(exp_{g(p)}^-1 o exp_{f(p)})_{s0(p)} s(p)");
  });
  checks.push_back([=](Rng& rng) {
    TargetManifold m = torus_of(cfg);
    MapPtr f = share(random_torus_map(m, n, rng));
    MapPtr g = neighbour(f, rng);
    PullbackSection s0 = random_section(f, 0.2, 0.8, rng);
    PullbackSection s = random_section(f, 0.2, 0.8, rng);
    PullbackSection d = transition_derivative(g, s0, s);
    double res = 0.0;
    for (int c = 0; c < f->atlas().chart_count(); ++c)
      res = std::max(res, (d.chart_vectors(c) - s.chart_vectors(c)).cwiseAbs().maxCoeff());
    return make_check("transition derivative is the identity (torus)", res, 1e-12,
                      "D(phi_g o phi_f^-1)_{s0} s (p) = D(exp_{g(p)}^-1 o exp_{f(p)})_{s0(p)} s(p)");
  });
  checks.push_back([=](Rng& rng) {
    MapPtr f = share(random_sphere_map(sphere_of(cfg), n, rng));
    PullbackSection zero = PullbackSection::zero(f, 0.2);
    PullbackSection s = random_section(f, 0.2, 0.8, rng);
    double res = relative((transition_derivative(f, zero, s) - s).sup_norm(), s.sup_norm());
    return make_check("derivative of the identity transition at 0", res, 1e-8,
                      "D(id) = id");
  });
  checks.push_back([=](Rng& rng) {
    TargetManifold round = sphere_of(cfg);
    TargetManifold conformal = round.with_conformal_factor(cfg.conformal);
    double res = 0.0;
    int sections = std::min(cfg.trials, 20);
    MapPtr f = share(random_sphere_map(round, cfg.conformal_resolution, rng));
    MapPtr fc = share(with_target(*f, conformal));
    for (int t = 0; t < sections; ++t) {
      PullbackSection s0 = random_section(f, 0.2, 0.8, rng);
      PullbackSection s = random_section(f, 0.2, 0.8, rng);
      PullbackSection fd = transition_difference(fc, s0, s, kFdStep);
      res = std::max(res, relative((transition_derivative(fc, s0, s) - fd).sup_norm(), fd.sup_norm()));
    }
    return make_check("round -> conformal chart transition is differentiable", res, 1e-4,
                      "the structure does not depend on the choice of Riemannian metric");
  });
  return checks;
}

std::string join(const std::vector<long>& v) {
  std::string s;
  for (long x : v) s += (s.empty() ? "" : ",") + std::to_string(x);
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known{
      "seed", "resolution", "order", "trials", "delta", "epsilon", "sphere_radius",
      "torus_periods", "conformal", "conformal_resolution", "descent", "out"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) throw ConfigError("unknown config field '" + it.key() + "'");
  ExperimentConfig c;
  try {
    c.seed = j.value("seed", c.seed);
    c.resolution = j.value("resolution", c.resolution);
    c.order = j.value("order", c.order);
    c.trials = j.value("trials", c.trials);
    if (j.contains("delta") && !j.at("delta").is_null()) c.delta = j.at("delta").get<double>();
    c.epsilon = j.value("epsilon", c.epsilon);
    c.sphere_radius = j.value("sphere_radius", c.sphere_radius);
    c.torus_periods = j.value("torus_periods", c.torus_periods);
    c.conformal = j.value("conformal", c.conformal);
    c.conformal_resolution = j.value("conformal_resolution", c.conformal_resolution);
    c.out = j.value("out", c.out);
    if (j.contains("descent")) {
      const json& d = j.at("descent");
      static const std::set<std::string> dknown{"target", "initial", "resolution", "steps",
                                                "step_size", "grad_tolerance",
                                                "expected_energy", "energy_tolerance"};
      for (auto it = d.begin(); it != d.end(); ++it)
        if (!dknown.count(it.key()))
          throw ConfigError("unknown descent field '" + it.key() + "'");
      DescentConfig& dc = c.descent;
      dc.target = d.value("target", dc.target);
      dc.initial = d.value("initial", dc.initial);
      dc.resolution = d.value("resolution", dc.resolution);
      dc.steps = d.value("steps", dc.steps);
      dc.step_size = d.value("step_size", dc.step_size);
      dc.grad_tolerance = d.value("grad_tolerance", dc.grad_tolerance);
      if (d.contains("expected_energy"))
        dc.expected_energy = d.at("expected_energy").is_null()
                                 ? std::nullopt
                                 : std::optional<double>(d.at("expected_energy").get<double>());
      dc.energy_tolerance = d.value("energy_tolerance", dc.energy_tolerance);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

void ExperimentConfig::validate() const {
  auto check_resolution = [](int r, const std::string& what) {
    if (r < 8 || r % 2 != 0)
      throw ConfigError(what + " must be even and at least 8, got " + std::to_string(r));
  };
  check_resolution(resolution, "resolution");
  check_resolution(conformal_resolution, "conformal_resolution");
  check_resolution(descent.resolution, "descent.resolution");
  if (order < 0 || order > 4) throw ConfigError("order must lie in [0, 4]");
  if (trials < 1) throw ConfigError("trials must be positive");
  if (delta && !(*delta > 0.0)) throw ConfigError("delta must be positive");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (!(sphere_radius > 0.0)) throw ConfigError("sphere_radius must be positive");
  if (torus_periods.size() != 2) throw ConfigError("torus_periods needs two entries");
  for (double p : torus_periods)
    if (!(p > 0.0)) throw ConfigError("torus periods must be positive");
  if (descent.steps < 1) throw ConfigError("descent.steps must be positive");
  if (!(descent.step_size > 0.0)) throw ConfigError("descent.step_size must be positive");
  try {
    TargetManifold::round_sphere(sphere_radius).with_conformal_factor(conformal);
  } catch (const Error& e) {
    throw ConfigError(std::string("conformal: ") + e.what());
  }
}

json ExperimentConfig::to_json() const {
  json d{{"target", descent.target},
         {"initial", descent.initial},
         {"resolution", descent.resolution},
         {"steps", descent.steps},
         {"step_size", descent.step_size},
         {"grad_tolerance", descent.grad_tolerance},
         {"expected_energy", descent.expected_energy ? json(*descent.expected_energy) : json()},
         {"energy_tolerance", descent.energy_tolerance}};
  return json{{"seed", seed},
              {"resolution", resolution},
              {"order", order},
              {"trials", trials},
              {"delta", delta ? json(*delta) : json()},
              {"epsilon", epsilon},
              {"sphere_radius", sphere_radius},
              {"torus_periods", torus_periods},
              {"conformal", conformal},
              {"conformal_resolution", conformal_resolution},
              {"descent", d},
              {"out", out}};
}

json CheckResult::to_json() const {
  return json{{"name", name},
              {"residual", residual},
              {"tolerance", tolerance},
              {"pass", pass},
              {"anchor", anchor}};
}

bool SuiteReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

json SuiteReport::to_json() const {
  json j = extra;
  j["suite"] = suite;
  j["pass"] = pass();
  j["checks"] = json::array();
  for (const CheckResult& c : checks) j["checks"].push_back(c.to_json());
  return j;
}

Suite parse_suite(const std::string& name) {
  for (Suite s : {Suite::Charts, Suite::Topology, Suite::Omega, Suite::Taylor,
                  Suite::Transitions, Suite::Descent, Suite::All})
    if (suite_name(s) == name) return s;
  throw ConfigError("unknown suite '" + name + "'");
}

std::string suite_name(Suite suite) {
  switch (suite) {
    case Suite::Charts: return "charts";
    case Suite::Topology: return "topology";
    case Suite::Omega: return "omega";
    case Suite::Taylor: return "taylor";
    case Suite::Transitions: return "transitions";
    case Suite::Descent: return "descent";
    case Suite::All: return "all";
  }
  return "unknown";
}

std::vector<Suite> expand(Suite suite) {
  if (suite != Suite::All) return {suite};
  return {Suite::Charts, Suite::Topology, Suite::Omega, Suite::Taylor, Suite::Transitions,
          Suite::Descent};
}

DescentRun run_descent(const ExperimentConfig& config) {
  const DescentConfig& dc = config.descent;
  TargetManifold target = TargetManifold::from_json(dc.target);
  MapFormula formula = make_formula(dc.initial, DomainKind::Circle, target);
  SampledMap f0 = sample_map(DomainAtlas::circle(), target, formula, dc.resolution);
  DescentOptions options;
  options.steps = dc.steps;
  options.step_size = dc.step_size;
  options.grad_tolerance = dc.grad_tolerance;
  if (config.delta) options.delta = *config.delta;
  DescentResult result = descend(f0, options);

  SuiteReport report{"descent", {}, json::object()};
  double final_energy = dirichlet_energy(result.map);
  double increase = 0.0, previous = result.trace.initial_energy;
  for (const TraceRow& row : result.trace.rows) {
    increase = std::max(increase, row.energy - previous);
    previous = row.energy;
  }
  report.checks.push_back(make_check("energy is non-increasing", increase, 0.0,
                                     "retraction by phi_f^-1 with backtracking"));
  if (dc.expected_energy)
    report.checks.push_back(make_check("final energy", std::abs(final_energy - *dc.expected_energy),
                                       dc.energy_tolerance, "minimum of the energy in the class"));
  if (target.is_torus()) {
    std::vector<long> w0 = winding_numbers(f0), w1 = winding_numbers(result.map);
    double diff = 0.0;
    for (std::size_t i = 0; i < w0.size(); ++i) diff += std::abs(w0[i] - w1[i]);
    report.checks.push_back(make_check("winding numbers are preserved", diff, 0.0,
                                       "steps inside a chart stay homotopic"));
    report.extra["winding"] = join(w1);
  }
  if (result.converged)
    report.checks.push_back(make_check("discrete geodesic residual at convergence",
                                       geodesic_residual(result.map), 1e-5,
                                       "critical points are geodesics"));
  report.extra["final_energy"] = final_energy;
  report.extra["initial_energy"] = result.trace.initial_energy;
  report.extra["steps"] = static_cast<int>(result.trace.rows.size());
  report.extra["converged"] = result.converged;
  report.extra["stalled"] = result.stalled;
  return DescentRun{std::move(f0), std::move(result), std::move(report)};
}

SuiteReport run_suite(const ExperimentConfig& config, Suite suite,
                      const std::filesystem::path* out_dir) {
  config.validate();
  switch (suite) {
    case Suite::Charts: return {"charts", run_checks(config, chart_checks(config))};
    case Suite::Topology: return {"topology", run_checks(config, topology_checks(config))};
    case Suite::Omega: return {"omega", run_checks(config, omega_checks(config))};
    case Suite::Taylor: return {"taylor", run_checks(config, taylor_checks(config))};
    case Suite::Transitions:
      return {"transitions", run_checks(config, transition_checks(config))};
    case Suite::Descent: {
      DescentRun run = run_descent(config);
      if (out_dir) {
        if (!run.result.trace.rows.empty())
          write_trace_csv(run.result.trace, (*out_dir / "descent_trace.csv").string());
        write_map_csv(run.result.map, (*out_dir / "descent_final_map.csv").string());
      }
      return run.report;
    }
    case Suite::All: break;
  }
  throw InvalidArgument("run_suite needs a concrete suite");
}

}  // namespace mapcalc
