#include "mapcalc/optimizer.hpp"

#include "mapcalc/errors.hpp"
#include "mapcalc/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace mapcalc {

namespace {

void require_loop(const SampledMap& f) {
  if (f.atlas().kind() != DomainKind::Circle)
    throw InvalidArgument("loop functionals need a circle domain");
}

double spacing(const SampledMap& f) {
  return 2.0 * std::numbers::pi / f.resolution();
}

// Sum of log_{f_i} f_{i+1} and log_{f_i} f_{i-1} for every sample.
std::vector<Vector> neighbour_logs(const TargetManifold& m, const std::vector<Point>& loop) {
  const int n = static_cast<int>(loop.size());
  std::vector<Vector> out(static_cast<std::size_t>(n));
  parallel_for(n, [&](int i) {
    const Point& p = loop[static_cast<std::size_t>(i)];
    const Point& next = loop[static_cast<std::size_t>((i + 1) % n)];
    const Point& prev = loop[static_cast<std::size_t>((i + n - 1) % n)];
    out[static_cast<std::size_t>(i)] = log_map(m, p, next).vec + log_map(m, p, prev).vec;
  });
  return out;
}

// Puts the per-sample vectors on every chart node over the same sample.
std::vector<Matrix> scatter(const SampledMap& f, const std::vector<Vector>& per_sample) {
  std::vector<Matrix> blocks;
  for (int c = 0; c < f.atlas().chart_count(); ++c) {
    const ChartGrid& g = f.grid(c);
    Matrix block(f.target().ambient_dimension(), g.node_count());
    for (int node = 0; node < g.node_count(); ++node)
      block.col(node) = per_sample[static_cast<std::size_t>(g.global_index(node)[0])];
    blocks.push_back(std::move(block));
  }
  return blocks;
}

double safe_energy(const SampledMap& f) {
  try {
    return dirichlet_energy(f);
  } catch (const BeyondInjectivityRadius&) {
    return std::numeric_limits<double>::infinity();
  }
}

}  // namespace

bool DescentTrace::monotone() const {
  double previous = initial_energy;
  for (const TraceRow& row : rows) {
    if (row.energy > previous) return false;
    previous = row.energy;
  }
  return true;
}

std::vector<Point> loop_samples(const SampledMap& f) {
  require_loop(f);
  std::vector<Point> loop(static_cast<std::size_t>(f.resolution()));
  std::vector<bool> seen(loop.size(), false);
  for (int c = 0; c < f.atlas().chart_count(); ++c) {
    const ChartGrid& g = f.grid(c);
    for (int node = 0; node < g.node_count(); ++node) {
      auto i = static_cast<std::size_t>(g.global_index(node)[0]);
      if (!seen[i]) {
        loop[i] = f.value(c, node);
        seen[i] = true;
      }
    }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end())
    throw InvalidArgument("chart grids do not cover every loop sample");
  return loop;
}

double dirichlet_energy(const SampledMap& f) {
  std::vector<Point> loop = loop_samples(f);
  const TargetManifold& m = f.target();
  const int n = static_cast<int>(loop.size());
  std::vector<double> terms(static_cast<std::size_t>(n));
  parallel_for(n, [&](int i) {
    const Point& p = loop[static_cast<std::size_t>(i)];
    TangentVector v = log_map(m, p, loop[static_cast<std::size_t>((i + 1) % n)]);
    double len = metric_norm(m, v);
    terms[static_cast<std::size_t>(i)] = len * len;
  });
  std::sort(terms.begin(), terms.end());
  double sum = 0.0;
  for (double t : terms) sum += t;
  return 0.5 * sum / spacing(f);
}

PullbackSection energy_gradient(const MapPtr& f) {
  std::vector<Point> loop = loop_samples(*f);
  std::vector<Vector> logs = neighbour_logs(f->target(), loop);
  double h2 = spacing(*f) * spacing(*f);
  for (Vector& v : logs) v = -v / h2;
  return PullbackSection(f, scatter(*f, logs), std::numeric_limits<double>::infinity());
}

double geodesic_residual(const SampledMap& f) {
  std::vector<Point> loop = loop_samples(f);
  std::vector<Vector> logs = neighbour_logs(f.target(), loop);
  double sup = 0.0;
  for (std::size_t i = 0; i < loop.size(); ++i)
    sup = std::max(sup, metric_norm(f.target(), TangentVector{loop[i], logs[i]}));
  return sup;
}

DescentResult descend(const SampledMap& f0, const DescentOptions& options) {
  if (!(options.step_size > 0.0)) throw InvalidArgument("step size must be positive");
  MapPtr f = share(f0);
  const double delta = options.delta > 0.0 ? options.delta : default_delta(f0);
  double energy = dirichlet_energy(*f);
  DescentResult result{*f, DescentTrace{energy, {}}};
  for (int t = 1; t <= options.steps; ++t) {
    PullbackSection grad = energy_gradient(f);
    double gnorm = grad.sup_norm();
    if (gnorm < options.grad_tolerance) {
      result.converged = true;
      break;
    }
    double eta = options.step_size;
    int halvings = 0;
    while (!(eta * gnorm < delta)) {
      eta *= 0.5;
      if (++halvings > options.max_halvings)
        throw StepOutOfChart("the smallest step still leaves the chart bound");
    }
    bool accepted = false;
    while (true) {
      SampledMap next = chart_inverse((grad * -eta).with_bound(delta));
      double e = safe_energy(next);
      if (!options.backtracking || e <= energy) {
        f = share(std::move(next));
        energy = e;
        accepted = true;
        break;
      }
      eta *= 0.5;
      if (++halvings > options.max_halvings) break;
    }
    if (!accepted) {
      result.stalled = true;
      break;
    }
    result.trace.rows.push_back({t, energy, gnorm, eta});
  }
  result.map = *f;
  return result;
}

DescentResult descend_fixed_chart(const SampledMap& f0, const DescentOptions& options) {
  if (!(options.step_size > 0.0)) throw InvalidArgument("step size must be positive");
  MapPtr base = share(f0);
  const double delta = options.delta > 0.0 ? options.delta : default_delta(f0);
  PullbackSection s = PullbackSection::zero(base, delta);
  MapPtr g = base;
  double energy = dirichlet_energy(f0);
  DescentResult result{f0, DescentTrace{energy, {}}};
  for (int t = 1; t <= options.steps; ++t) {
    PullbackSection grad = energy_gradient(g);
    double gnorm = grad.sup_norm();
    if (gnorm < options.grad_tolerance) {
      result.converged = true;
      break;
    }
    PullbackSection pulled =
        transition_derivative(base, PullbackSection::zero(g, delta), grad);
    PullbackSection next = (s - pulled * options.step_size).with_bound(delta);
    if (!(next.sup_norm() < delta))
      throw StepOutOfChart("fixed-chart iterate leaves the chart bound");
    s = next;
    g = share(chart_inverse(s));
    energy = dirichlet_energy(*g);
    result.trace.rows.push_back({t, energy, gnorm, options.step_size});
  }
  result.map = *g;
  return result;
}

std::vector<long> winding_numbers(const SampledMap& f) {
  if (!f.target().is_torus()) throw InvalidArgument("winding numbers need a torus target");
  std::vector<Point> loop = loop_samples(f);
  const TargetManifold& m = f.target();
  Vector total = Vector::Zero(m.dimension());
  for (std::size_t i = 0; i < loop.size(); ++i)
    total += m.wrap(loop[(i + 1) % loop.size()].coords - loop[i].coords);
  std::vector<long> out;
  for (int d = 0; d < m.dimension(); ++d)
    out.push_back(std::lround(total[d] / m.periods()[static_cast<std::size_t>(d)]));
  return out;
}

}  // namespace mapcalc
