#pragma once

#include "mapcalc/charts.hpp"

#include <string>
#include <vector>

namespace mapcalc {

/// One accepted descent step.
struct TraceRow {
  int step = 0;
  double energy = 0.0;
  double grad_norm = 0.0;  // sup over the nodes of |grad E|_h before the step
  double step_size = 0.0;  // the accepted step size

  bool operator==(const TraceRow&) const = default;
};

struct DescentTrace {
  double initial_energy = 0.0;
  std::vector<TraceRow> rows;

  /// Energies never increase, starting from initial_energy.
  bool monotone() const;
};

/// The loop f(theta_i), i = 0 .. n - 1, at the domain samples
/// theta_i = 2 pi i / n of a circle-domain map.
std::vector<Point> loop_samples(const SampledMap& f);

/// E(f) = 1/2 sum_i |log_{f_i} f_{i+1}|_h^2 / dtheta. The terms are summed in
/// sorted order, so the value does not depend on where the loop starts.
/// Throws BeyondInjectivityRadius when neighbouring samples are too far
/// apart.
double dirichlet_energy(const SampledMap& f);

/// grad E at f_i = -(log_{f_i} f_{i+1} + log_{f_i} f_{i-1}) / dtheta^2, the
/// gradient for the pairing <a, b> = sum_i dtheta h(a_i, b_i). The section
/// bound is infinite: it is a direction, not a chart value.
PullbackSection energy_gradient(const MapPtr& f);

/// sup_i |log_{f_i} f_{i+1} + log_{f_i} f_{i-1}|_h, the residual of the
/// discrete geodesic equation.
double geodesic_residual(const SampledMap& f);

struct DescentOptions {
  int steps = 1000;
  double step_size = 0.1;
  bool backtracking = true;
  int max_halvings = 30;
  double grad_tolerance = 0.0;  // stop once sup |grad| drops below
  double delta = 0.0;           // chart bound, default_delta(f) when 0
};

struct DescentResult {
  SampledMap map;
  DescentTrace trace;
  bool converged = false;  // stopped on the gradient tolerance
  bool stalled = false;    // no decrease after max_halvings
};

/// Gradient descent with moving charts:
/// f_{t+1} = chart_inverse(f_t, -eta grad E(f_t)). Each step starts from
/// `step_size` and halves until eta sup|grad| < delta and, with
/// backtracking, until the energy does not increase. Throws StepOutOfChart
/// when even the smallest step leaves the chart bound.
DescentResult descend(const SampledMap& f0, const DescentOptions& options);

/// Descent in the fixed chart at f0: the iterate is a section s_t over f0,
/// s_{t+1} = s_t - eta D(phi_{f0} o phi_{g_t}^-1)_0 grad E(g_t) with
/// g_t = phi_{f0}^-1(s_t), at a constant step size and without
/// backtracking.
DescentResult descend_fixed_chart(const SampledMap& f0, const DescentOptions& options);

/// Integer winding vector of a torus-valued loop.
std::vector<long> winding_numbers(const SampledMap& f);

}  // namespace mapcalc
