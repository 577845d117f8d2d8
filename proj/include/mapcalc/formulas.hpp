#pragma once

#include "mapcalc/sampled_map.hpp"

namespace mapcalc {

/// Builds a closed-form map from a JSON descriptor. Recognised kinds:
///   constant      {"point": [...]}
///   great_circle  {"tilt": a}            circle -> sphere, the equator tilted about x
///   cap_loop      {"polar_angle": a}     circle -> sphere, latitude circle
///   torus_linear  {"winding": [...] or [[...], [...]], "offset": [...],
///                  "amplitude": [...], "mode": m}
///                 offset + W theta + amplitude sin(m theta_1)
///   expression    {"components": [...], "normalize": b}
///                 components in x = theta_1, y = theta_2; normalize scales
///                 onto the sphere
/// Throws ConfigError on unknown kinds or mismatched dimensions.
MapFormula make_formula(const json& descriptor, DomainKind domain,
                        const TargetManifold& target);

}  // namespace mapcalc
