#include "mapcalc/atlas.hpp"

#include "mapcalc/errors.hpp"

#include <cmath>
#include <numbers>

namespace mapcalc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

Chart make_chart(int id, const std::vector<int>& half_turns) {
  const auto dims = static_cast<Eigen::Index>(half_turns.size());
  Chart c;
  c.id = id;
  c.half_turns = half_turns;
  auto box = [&](double pad) {
    Box b{Vector(dims), Vector(dims)};
    for (Eigen::Index d = 0; d < dims; ++d) {
      b.lower[d] = half_turns[static_cast<std::size_t>(d)] * kPi - pad;
      b.upper[d] = (half_turns[static_cast<std::size_t>(d)] + 1) * kPi + pad;
    }
    return b;
  };
  c.compact = box(0.0);
  c.domain = box(kPi / 4.0);
  c.enlarged = box(3.0 * kPi / 8.0);
  return c;
}

}  // namespace

bool Box::contains(const Vector& x, double tol) const {
  for (Eigen::Index d = 0; d < x.size(); ++d) {
    if (x[d] < lower[d] - tol || x[d] > upper[d] + tol) return false;
  }
  return true;
}

Vector reduce_angles(const Vector& angles) {
  Vector out(angles.size());
  for (Eigen::Index d = 0; d < angles.size(); ++d) {
    double r = std::fmod(angles[d], kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r -= kTwoPi;
    out[d] = r;
  }
  return out;
}

Vector ChartGrid::coordinate(int node) const {
  auto ij = unravel(node);
  Vector x(dims);
  for (int d = 0; d < dims; ++d) x[d] = (first[static_cast<std::size_t>(d)] + ij[static_cast<std::size_t>(d)]) * spacing;
  return x;
}

std::array<int, 2> ChartGrid::global_index(int node) const {
  auto ij = unravel(node);
  std::array<int, 2> g{0, 0};
  for (std::size_t d = 0; d < static_cast<std::size_t>(dims); ++d) {
    int j = first[d] + ij[d];
    g[d] = ((j % resolution) + resolution) % resolution;
  }
  return g;
}

Vector ChartGrid::angles(int node) const {
  auto g = global_index(node);
  Vector a(dims);
  for (int d = 0; d < dims; ++d) a[d] = g[static_cast<std::size_t>(d)] * spacing;
  return a;
}

std::vector<int> ChartGrid::nodes_in(const Box& box) const {
  std::vector<int> nodes;
  const double tol = 1e-9 * spacing;
  for (int node = 0; node < node_count(); ++node) {
    if (box.contains(coordinate(node), tol)) nodes.push_back(node);
  }
  return nodes;
}

DomainAtlas DomainAtlas::circle() {
  DomainAtlas a;
  a.kind_ = DomainKind::Circle;
  a.charts_ = {make_chart(0, {0}), make_chart(1, {1})};
  return a;
}

DomainAtlas DomainAtlas::torus2() {
  DomainAtlas a;
  a.kind_ = DomainKind::Torus2;
  a.charts_ = {make_chart(0, {0, 0}), make_chart(1, {1, 0}),
               make_chart(2, {0, 1}), make_chart(3, {1, 1})};
  return a;
}

DomainAtlas DomainAtlas::of_kind(DomainKind kind) {
  return kind == DomainKind::Circle ? circle() : torus2();
}

const Chart& DomainAtlas::chart(int id) const {
  if (id < 0 || id >= chart_count())
    throw InvalidArgument("chart id " + std::to_string(id) + " out of range");
  return charts_[static_cast<std::size_t>(id)];
}

ChartGrid DomainAtlas::grid(int chart_id, int resolution) const {
  if (resolution < 8 || resolution % 2 != 0)
    throw InvalidArgument("resolution must be even and at least 8, got " +
                          std::to_string(resolution));
  const Chart& c = chart(chart_id);
  ChartGrid g;
  g.dims = dimension();
  g.resolution = resolution;
  g.spacing = kTwoPi / resolution;
  // Margin nodes reach 3 pi / 8 past K_i: 3 n / 16 nodes, rounded down.
  g.margin = (3 * resolution) / 16;
  for (std::size_t d = 0; d < static_cast<std::size_t>(g.dims); ++d) {
    g.first[d] = c.half_turns[d] * (resolution / 2) - g.margin;
    g.count[d] = resolution / 2 + 1 + 2 * g.margin;
  }
  return g;
}

std::optional<Vector> DomainAtlas::to_chart(int chart_id, const Vector& angles,
                                            const Box* box, double tol) const {
  const Chart& c = chart(chart_id);
  const Box& b = box ? *box : c.enlarged;
  Vector reduced = reduce_angles(angles);
  Vector x(reduced.size());
  for (Eigen::Index d = 0; d < reduced.size(); ++d) {
    bool found = false;
    for (int k = -1; k <= 2 && !found; ++k) {
      double candidate = reduced[d] + k * kTwoPi;
      if (candidate >= b.lower[d] - tol && candidate <= b.upper[d] + tol) {
        x[d] = candidate;
        found = true;
      }
    }
    if (!found) return std::nullopt;
  }
  return x;
}

int DomainAtlas::chart_with_compact(const Vector& angles) const {
  for (const Chart& c : charts_) {
    if (to_chart(c.id, angles, &c.compact)) return c.id;
  }
  return -1;
}

json DomainAtlas::to_json() const {
  json j;
  j["kind"] = kind_ == DomainKind::Circle ? "circle" : "torus2";
  j["charts"] = chart_count();
  return j;
}

DomainAtlas DomainAtlas::from_json(const json& j) {
  std::string kind = j.is_string() ? j.get<std::string>() : j.at("kind").get<std::string>();
  if (kind == "circle") return circle();
  if (kind == "torus2") return torus2();
  throw ConfigError("unknown domain kind '" + kind + "'");
}

}  // namespace mapcalc
