#include "mapcalc/section.hpp"

#include "mapcalc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mapcalc {

bool same_map(const SampledMap& a, const SampledMap& b) {
  return &a == &b || a == b;
}

double min_injectivity_radius(const SampledMap& f) {
  double lo = std::numeric_limits<double>::infinity();
  for (int c = 0; c < f.atlas().chart_count(); ++c) {
    for (int node = 0; node < f.grid(c).node_count(); ++node)
      lo = std::min(lo, injectivity_radius(f.target(), f.value(c, node)));
  }
  return lo;
}

PullbackSection::PullbackSection(std::shared_ptr<const SampledMap> base,
                                 std::vector<Matrix> vectors, double bound)
    : base_(std::move(base)), vectors_(std::move(vectors)), bound_(bound) {
  if (!base_) throw InvalidArgument("section needs a base map");
  if (!(bound_ > 0.0)) throw InvalidArgument("section bound must be positive");
  const SampledMap& f = *base_;
  if (static_cast<int>(vectors_.size()) != f.atlas().chart_count())
    throw InvalidArgument("one vector block per chart is required");
  for (int c = 0; c < f.atlas().chart_count(); ++c) {
    const Matrix& v = vectors_[static_cast<std::size_t>(c)];
    const Matrix& p = f.chart_values(c);
    if (v.rows() != p.rows() || v.cols() != p.cols())
      throw InvalidArgument("vector block has wrong shape");
    if (f.target().is_sphere()) {
      for (Eigen::Index node = 0; node < v.cols(); ++node) {
        double dot = p.col(node).dot(v.col(node));
        double scale = std::max(1.0, f.target().radius() * v.col(node).norm());
        if (std::abs(dot) > 1e-10 * scale)
          throw InvalidPoint("section vector is not tangent at its base point");
      }
    }
  }
}

PullbackSection PullbackSection::zero(std::shared_ptr<const SampledMap> base,
                                      double bound) {
  std::vector<Matrix> vectors;
  for (int c = 0; c < base->atlas().chart_count(); ++c)
    vectors.push_back(Matrix::Zero(base->chart_values(c).rows(),
                                   base->chart_values(c).cols()));
  return PullbackSection(std::move(base), std::move(vectors), bound);
}

PullbackSection PullbackSection::from_field(
    std::shared_ptr<const SampledMap> base, double bound,
    const std::function<Vector(const Vector&, const Point&)>& field) {
  std::vector<Matrix> vectors;
  const SampledMap& f = *base;
  for (int c = 0; c < f.atlas().chart_count(); ++c) {
    const ChartGrid& g = f.grid(c);
    Matrix block(f.target().ambient_dimension(), g.node_count());
    for (int node = 0; node < g.node_count(); ++node) {
      Point p = f.value(c, node);
      block.col(node) = f.target().project_to_tangent(p, field(g.angles(node), p));
    }
    vectors.push_back(std::move(block));
  }
  return PullbackSection(std::move(base), std::move(vectors), bound);
}

PullbackSection PullbackSection::with_bound(double bound) const {
  return PullbackSection(base_, vectors_, bound);
}

const Matrix& PullbackSection::chart_vectors(int chart_id) const {
  base_->atlas().chart(chart_id);
  return vectors_[static_cast<std::size_t>(chart_id)];
}

TangentVector PullbackSection::at(int chart_id, int node) const {
  return TangentVector{base_->value(chart_id, node), chart_vectors(chart_id).col(node)};
}

double PullbackSection::sup_norm() const {
  double sup = 0.0;
  for (int c = 0; c < base_->atlas().chart_count(); ++c) {
    const Matrix& v = vectors_[static_cast<std::size_t>(c)];
    for (Eigen::Index node = 0; node < v.cols(); ++node)
      sup = std::max(sup, metric_norm(base_->target(),
                                      at(c, static_cast<int>(node))));
  }
  return sup;
}

void PullbackSection::check_within_bound() const {
  double sup = sup_norm();
  if (!(sup < bound_))
    throw WellDefinednessViolated("section sup norm " + std::to_string(sup) +
                                  " is not below its bound " +
                                  std::to_string(bound_));
}

PullbackSection PullbackSection::operator+(const PullbackSection& other) const {
  if (!same_map(*base_, *other.base_))
    throw BaseMismatch("cannot add sections over different base maps");
  std::vector<Matrix> out;
  for (std::size_t c = 0; c < vectors_.size(); ++c)
    out.push_back(vectors_[c] + other.vectors_[c]);
  return PullbackSection(base_, std::move(out), std::max(bound_, other.bound_));
}

PullbackSection PullbackSection::operator-(const PullbackSection& other) const {
  return *this + other * -1.0;
}

PullbackSection PullbackSection::operator*(double a) const {
  std::vector<Matrix> out;
  for (const Matrix& v : vectors_) out.push_back(a * v);
  return PullbackSection(base_, std::move(out), bound_);
}

}  // namespace mapcalc
