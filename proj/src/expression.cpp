#include "mapcalc/expression.hpp"

#include "mapcalc/errors.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <vector>

namespace mapcalc {

namespace {

struct Dual {
  double v = 0.0;
  Eigen::Vector3d g = Eigen::Vector3d::Zero();
};

enum class Op {
  Constant, Variable, Add, Sub, Mul, Div, Pow, Neg,
  Sin, Cos, Tan, Exp, Log, Sqrt, Tanh, Cosh, Sinh
};

}  // namespace

struct Expression::Node {
  Op op = Op::Constant;
  double constant = 0.0;
  int variable = 0;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

NodePtr make_constant(double c) {
  auto n = std::make_shared<Expression::Node>();
  n->op = Op::Constant;
  n->constant = c;
  return n;
}

NodePtr make_node(Op op, NodePtr lhs, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Expression::Node>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " at offset " + std::to_string(pos_) + " in '" +
                     s_ + "'");
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr n = term();
    for (;;) {
      if (accept('+'))
        n = make_node(Op::Add, n, term());
      else if (accept('-'))
        n = make_node(Op::Sub, n, term());
      else
        return n;
    }
  }

  NodePtr term() {
    NodePtr n = unary();
    for (;;) {
      if (accept('*'))
        n = make_node(Op::Mul, n, unary());
      else if (accept('/'))
        n = make_node(Op::Div, n, unary());
      else
        return n;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make_node(Op::Neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make_node(Op::Pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr n = expr();
      if (!accept(')')) fail("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      return make_constant(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      std::string id = s_.substr(start, pos_ - start);
      if (id == "x" || id == "y" || id == "z") {
        auto n = std::make_shared<Expression::Node>();
        n->op = Op::Variable;
        n->variable = id[0] - 'x';
        return n;
      }
      if (id == "pi") return make_constant(std::numbers::pi);
      if (id == "e") return make_constant(std::numbers::e);
      static const std::vector<std::pair<std::string, Op>> functions = {
          {"sin", Op::Sin},   {"cos", Op::Cos},   {"tan", Op::Tan},
          {"exp", Op::Exp},   {"log", Op::Log},   {"sqrt", Op::Sqrt},
          {"tanh", Op::Tanh}, {"cosh", Op::Cosh}, {"sinh", Op::Sinh}};
      for (const auto& [name, op] : functions) {
        if (name == id) {
          if (!accept('(')) fail("expected '(' after " + id);
          NodePtr arg = expr();
          if (!accept(')')) fail("expected ')'");
          return make_node(op, arg);
        }
      }
      fail("unknown identifier '" + id + "'");
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

Dual eval(const Expression::Node& n, const Eigen::Vector3d& x) {
  auto chain = [](const Dual& a, double value, double slope) {
    return Dual{value, slope * a.g};
  };
  switch (n.op) {
    case Op::Constant:
      return Dual{n.constant, Eigen::Vector3d::Zero()};
    case Op::Variable: {
      Dual d{x[n.variable], Eigen::Vector3d::Zero()};
      d.g[n.variable] = 1.0;
      return d;
    }
    case Op::Neg: {
      Dual a = eval(*n.lhs, x);
      return Dual{-a.v, -a.g};
    }
    case Op::Add: {
      Dual a = eval(*n.lhs, x), b = eval(*n.rhs, x);
      return Dual{a.v + b.v, a.g + b.g};
    }
    case Op::Sub: {
      Dual a = eval(*n.lhs, x), b = eval(*n.rhs, x);
      return Dual{a.v - b.v, a.g - b.g};
    }
    case Op::Mul: {
      Dual a = eval(*n.lhs, x), b = eval(*n.rhs, x);
      return Dual{a.v * b.v, a.g * b.v + b.g * a.v};
    }
    case Op::Div: {
      Dual a = eval(*n.lhs, x), b = eval(*n.rhs, x);
      return Dual{a.v / b.v, (a.g * b.v - b.g * a.v) / (b.v * b.v)};
    }
    case Op::Pow: {
      Dual a = eval(*n.lhs, x), b = eval(*n.rhs, x);
      double v = std::pow(a.v, b.v);
      Eigen::Vector3d g = Eigen::Vector3d::Zero();
      if (a.v != 0.0) g += b.v * std::pow(a.v, b.v - 1.0) * a.g;
      if (!b.g.isZero()) g += v * std::log(a.v) * b.g;
      return Dual{v, g};
    }
    case Op::Sin: {
      Dual a = eval(*n.lhs, x);
      return chain(a, std::sin(a.v), std::cos(a.v));
    }
    case Op::Cos: {
      Dual a = eval(*n.lhs, x);
      return chain(a, std::cos(a.v), -std::sin(a.v));
    }
    case Op::Tan: {
      Dual a = eval(*n.lhs, x);
      double c = std::cos(a.v);
      return chain(a, std::tan(a.v), 1.0 / (c * c));
    }
    case Op::Exp: {
      Dual a = eval(*n.lhs, x);
      double v = std::exp(a.v);
      return chain(a, v, v);
    }
    case Op::Log: {
      Dual a = eval(*n.lhs, x);
      return chain(a, std::log(a.v), 1.0 / a.v);
    }
    case Op::Sqrt: {
      Dual a = eval(*n.lhs, x);
      double v = std::sqrt(a.v);
      return chain(a, v, 0.5 / v);
    }
    case Op::Tanh: {
      Dual a = eval(*n.lhs, x);
      double v = std::tanh(a.v);
      return chain(a, v, 1.0 - v * v);
    }
    case Op::Cosh: {
      Dual a = eval(*n.lhs, x);
      return chain(a, std::cosh(a.v), std::sinh(a.v));
    }
    case Op::Sinh: {
      Dual a = eval(*n.lhs, x);
      return chain(a, std::sinh(a.v), std::cosh(a.v));
    }
  }
  return {};
}

}  // namespace

Expression::Expression(std::string source)
    : source_(std::move(source)), root_(Parser(source_).parse()) {}

double Expression::value(const Eigen::Vector3d& x) const {
  return eval(*root_, x).v;
}

double Expression::value_and_gradient(const Eigen::Vector3d& x,
                                      Eigen::Vector3d& gradient) const {
  Dual d = eval(*root_, x);
  gradient = d.g;
  return d.v;
}

}  // namespace mapcalc
