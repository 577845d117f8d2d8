#pragma once

#include "mapcalc/charts.hpp"

#include <random>

namespace mapcalc {

using Rng = std::mt19937_64;

/// Uniform in [lo, hi), drawn from the raw generator so results do not
/// depend on the standard library's distribution implementations.
double uniform(Rng& rng, double lo = 0.0, double hi = 1.0);

/// Random rotation of R^3 (uniform axis, angle in [0, pi)).
Eigen::Matrix3d random_rotation(Rng& rng);

/// A smooth random section over f: a trigonometric polynomial of degree
/// `modes` in the domain angles with uniform coefficients, projected onto
/// the tangent spaces and scaled so that sup |s|_h = fraction * bound.
PullbackSection random_section(const MapPtr& f, double bound, double fraction, Rng& rng,
                               int modes = 3);

}  // namespace mapcalc
