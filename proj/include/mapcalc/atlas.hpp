#pragma once

#include "mapcalc/manifold.hpp"

#include <array>
#include <optional>
#include <vector>

namespace mapcalc {

enum class DomainKind { Circle, Torus2 };

/// Axis-aligned box in chart coordinates.
struct Box {
  Vector lower;
  Vector upper;

  bool contains(const Vector& x, double tol = 0.0) const;
};

/// A chart of the domain M = (R / 2 pi Z)^d. The chart map is the identity
/// on coordinates and the embedding reduces each coordinate mod 2 pi, so the
/// chart is injective on any box of side < 2 pi.
struct Chart {
  int id = 0;
  Box domain;     // U_i, open
  Box enlarged;   // the enlarged chart domain, open, closure(U_i) inside it
  Box compact;    // K_i, closed
  std::vector<int> half_turns;  // K_i = prod [h pi, (h + 1) pi]
};

/// Uniform grid of one chart: along each axis the nodes x_j = j * spacing
/// for j in [first, first + count). Node j lies over the domain sample
/// (j mod resolution).
struct ChartGrid {
  int dims = 1;
  int resolution = 0;
  double spacing = 0.0;
  int margin = 0;
  std::array<int, 2> first{0, 0};
  std::array<int, 2> count{1, 1};

  int node_count() const { return count[0] * count[1]; }
  int index(int i0, int i1 = 0) const { return i0 + count[0] * i1; }
  std::array<int, 2> unravel(int node) const {
    return {node % count[0], node / count[0]};
  }
  /// Chart coordinates of a node.
  Vector coordinate(int node) const;
  /// Domain angles in [0, 2 pi) of a node, computed from the integer index so
  /// shared nodes of different charts agree bit for bit.
  Vector angles(int node) const;
  /// Integer domain sample indices (j mod resolution) per axis.
  std::array<int, 2> global_index(int node) const;
  /// Nodes whose coordinates lie in the closed box.
  std::vector<int> nodes_in(const Box& box) const;
};

/// Fixed finite atlas of the circle (2 charts) or the flat 2-torus
/// (4 charts) with compact cover {K_i}. Each K_i is a closed half-turn box,
/// U_i extends it by pi/4 and the enlarged domain by 3 pi/8 per side.
class DomainAtlas {
 public:
  static DomainAtlas circle();
  static DomainAtlas torus2();
  static DomainAtlas of_kind(DomainKind kind);

  DomainKind kind() const noexcept { return kind_; }
  int dimension() const noexcept { return kind_ == DomainKind::Circle ? 1 : 2; }
  const std::vector<Chart>& charts() const noexcept { return charts_; }
  const Chart& chart(int id) const;
  int chart_count() const noexcept { return static_cast<int>(charts_.size()); }

  /// Grid of one chart at the given resolution (samples per full turn).
  /// Throws InvalidArgument unless resolution is even and >= 8.
  ChartGrid grid(int chart_id, int resolution) const;

  /// Representative of the domain point `angles` in chart coordinates inside
  /// `box` (default the enlarged domain), if any.
  std::optional<Vector> to_chart(int chart_id, const Vector& angles,
                                 const Box* box = nullptr,
                                 double tol = 1e-12) const;

  /// First chart whose compact set K_i contains the point, or -1.
  int chart_with_compact(const Vector& angles) const;

  json to_json() const;
  static DomainAtlas from_json(const json& j);

  bool operator==(const DomainAtlas& other) const { return kind_ == other.kind_; }

 private:
  DomainKind kind_ = DomainKind::Circle;
  std::vector<Chart> charts_;
};

/// Reduce each coordinate into [0, 2 pi).
Vector reduce_angles(const Vector& angles);

}  // namespace mapcalc
