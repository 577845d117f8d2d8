#pragma once

#include "mapcalc/sampled_map.hpp"

#include <functional>
#include <memory>

namespace mapcalc {

/// A section of the pullback bundle f*TN sampled on the chart grids of the
/// base map f: at node p it holds a tangent vector at f(p), stored in
/// ambient coordinates. `bound` is the radius delta inside which the section
/// is a valid chart value (sup |s|_h < bound < inj along f).
class PullbackSection {
 public:
  PullbackSection(std::shared_ptr<const SampledMap> base,
                  std::vector<Matrix> vectors, double bound);

  static PullbackSection zero(std::shared_ptr<const SampledMap> base,
                              double bound);
  /// Samples a vector field given on domain angles and base points,
  /// projected onto the tangent spaces.
  static PullbackSection from_field(
      std::shared_ptr<const SampledMap> base, double bound,
      const std::function<Vector(const Vector& angles, const Point& base)>& field);

  const SampledMap& base_map() const noexcept { return *base_; }
  const std::shared_ptr<const SampledMap>& base_ptr() const noexcept { return base_; }
  double bound() const noexcept { return bound_; }
  PullbackSection with_bound(double bound) const;

  const Matrix& chart_vectors(int chart_id) const;
  TangentVector at(int chart_id, int node) const;

  /// sup over all grid nodes of |s(p)|_h.
  double sup_norm() const;
  /// Throws WellDefinednessViolated unless sup |s|_h < bound.
  void check_within_bound() const;

  PullbackSection operator+(const PullbackSection& other) const;
  PullbackSection operator-(const PullbackSection& other) const;
  PullbackSection operator*(double a) const;

 private:
  std::shared_ptr<const SampledMap> base_;
  std::vector<Matrix> vectors_;
  double bound_;
};

inline PullbackSection operator*(double a, const PullbackSection& s) { return s * a; }

/// True when both maps carry identical data (shared storage short-circuits).
bool same_map(const SampledMap& a, const SampledMap& b);

/// Minimum over the grid of inj_radius at f(p).
double min_injectivity_radius(const SampledMap& f);

}  // namespace mapcalc
