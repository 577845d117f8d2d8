#include "mapcalc/random_fields.hpp"

#include "mapcalc/errors.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace mapcalc {

double uniform(Rng& rng, double lo, double hi) {
  double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

Eigen::Matrix3d random_rotation(Rng& rng) {
  double z = uniform(rng, -1.0, 1.0);
  double phi = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  double r = std::sqrt(1.0 - z * z);
  Eigen::Vector3d axis(r * std::cos(phi), r * std::sin(phi), z);
  return Eigen::AngleAxisd(uniform(rng, 0.0, std::numbers::pi), axis).toRotationMatrix();
}

PullbackSection random_section(const MapPtr& f, double bound, double fraction, Rng& rng,
                               int modes) {
  const int dim = f->target().ambient_dimension();
  const int domain_dim = f->atlas().dimension();
  struct Term {
    std::array<int, 2> k;
    Vector cos_coef;
    Vector sin_coef;
  };
  std::vector<Term> terms;
  for (int k0 = 0; k0 <= modes; ++k0) {
    for (int k1 = domain_dim > 1 ? -modes : 0; k1 <= (domain_dim > 1 ? modes : 0); ++k1) {
      Term t{{k0, k1}, Vector(dim), Vector(dim)};
      for (int d = 0; d < dim; ++d) {
        t.cos_coef[d] = uniform(rng, -1.0, 1.0);
        t.sin_coef[d] = uniform(rng, -1.0, 1.0);
      }
      terms.push_back(std::move(t));
    }
  }
  PullbackSection raw = PullbackSection::from_field(
      f, bound, [&](const Vector& angles, const Point&) {
        Vector v = Vector::Zero(dim);
        for (const Term& t : terms) {
          double phase = t.k[0] * angles[0] + (domain_dim > 1 ? t.k[1] * angles[1] : 0.0);
          v += std::cos(phase) * t.cos_coef + std::sin(phase) * t.sin_coef;
        }
        return v;
      });
  double sup = raw.sup_norm();
  if (!(sup > 0.0)) throw InvalidArgument("random section vanished");
  return raw * (fraction * bound / sup);
}

}  // namespace mapcalc
