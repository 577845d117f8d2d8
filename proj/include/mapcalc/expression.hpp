#pragma once

#include <Eigen/Dense>

#include <memory>
#include <string>

namespace mapcalc {

/// A parsed closed-form scalar expression in the ambient coordinates
/// `x`, `y`, `z`. Supports + - * / ^, parentheses, the constants `pi` and
/// `e`, and the functions sin, cos, tan, exp, log, sqrt, tanh, cosh, sinh.
///
/// Evaluation is forward-mode differentiated, so the ambient gradient comes
/// for free and is exact up to rounding.
class Expression {
 public:
  struct Node;

  /// Throws ParseError on malformed input.
  explicit Expression(std::string source);

  double value(const Eigen::Vector3d& x) const;
  /// Value and ambient gradient in one pass.
  double value_and_gradient(const Eigen::Vector3d& x,
                            Eigen::Vector3d& gradient) const;

  const std::string& source() const noexcept { return source_; }

 private:
  std::string source_;
  std::shared_ptr<const Node> root_;
};

}  // namespace mapcalc
