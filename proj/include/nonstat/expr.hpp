// Immutable expression trees over named real variables: construction,
// evaluation, variable listing, and a minimal-parentheses printer whose
// output re-parses to a structurally identical tree.

#pragma once

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "nonstat/errors.hpp"

namespace nonstat {

enum class UnaryOp { Neg, Sin, Cos, Exp, Log, Sqrt, Abs };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

struct ExprNode;

// Value-semantic handle to a shared, immutable node. Copies are cheap and
// subtrees may be shared; nothing mutates a node after construction, so
// expressions are safe to share across threads.
class Expr {
 public:
  Expr() = delete;

  const ExprNode& node() const { return *node_; }

  static Expr make(ExprNode node);

 private:
  explicit Expr(std::shared_ptr<const ExprNode> node)
      : node_(std::move(node)) {}

  std::shared_ptr<const ExprNode> node_;
};

struct ExprNode {
  struct Constant {
    double value;
  };
  struct Variable {
    std::string name;
  };
  struct Unary {
    UnaryOp op;
    Expr operand;
  };
  struct Binary {
    BinaryOp op;
    Expr lhs;
    Expr rhs;
  };

  std::variant<Constant, Variable, Unary, Binary> v;
};

inline Expr Expr::make(ExprNode node) {
  return Expr(std::make_shared<const ExprNode>(std::move(node)));
}

inline Expr constant(double value) {
  return Expr::make({ExprNode::Constant{value}});
}

inline Expr variable(std::string name) {
  return Expr::make({ExprNode::Variable{std::move(name)}});
}

inline Expr unary(UnaryOp op, Expr operand) {
  return Expr::make({ExprNode::Unary{op, std::move(operand)}});
}

inline Expr binary(BinaryOp op, Expr lhs, Expr rhs) {
  return Expr::make({ExprNode::Binary{op, std::move(lhs), std::move(rhs)}});
}

namespace detail {
template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;
}  // namespace detail

// Structural equality; constant values compare bitwise.
inline bool operator==(const Expr& a, const Expr& b) {
  const auto& na = a.node().v;
  const auto& nb = b.node().v;
  if (na.index() != nb.index()) return false;
  return std::visit(
      detail::overloaded{
          [&](const ExprNode::Constant& c) {
            const auto& d = std::get<ExprNode::Constant>(nb);
            return std::bit_cast<std::uint64_t>(c.value) ==
                   std::bit_cast<std::uint64_t>(d.value);
          },
          [&](const ExprNode::Variable& x) {
            return x.name == std::get<ExprNode::Variable>(nb).name;
          },
          [&](const ExprNode::Unary& u) {
            const auto& w = std::get<ExprNode::Unary>(nb);
            return u.op == w.op && u.operand == w.operand;
          },
          [&](const ExprNode::Binary& p) {
            const auto& q = std::get<ExprNode::Binary>(nb);
            return p.op == q.op && p.lhs == q.lhs && p.rhs == q.rhs;
          }},
      na);
}

inline bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

inline double apply(UnaryOp op, double x) {
  switch (op) {
    case UnaryOp::Neg:
      return -x;
    case UnaryOp::Sin:
      return std::sin(x);
    case UnaryOp::Cos:
      return std::cos(x);
    case UnaryOp::Exp:
      return std::exp(x);
    case UnaryOp::Log:
      return std::log(x);
    case UnaryOp::Sqrt:
      return std::sqrt(x);
    case UnaryOp::Abs:
      return std::abs(x);
  }
  return 0;  // unreachable
}

inline double apply(BinaryOp op, double a, double b) {
  switch (op) {
    case BinaryOp::Add:
      return a + b;
    case BinaryOp::Sub:
      return a - b;
    case BinaryOp::Mul:
      return a * b;
    case BinaryOp::Div:
      return a / b;
    case BinaryOp::Pow:
      return std::pow(a, b);
  }
  return 0;  // unreachable
}

// Evaluates with IEEE double semantics: non-finite results are returned
// as-is, never raised. `lookup` maps a variable name to its value and
// throws UnboundVariable for unknown names.
template <class Lookup>
double evaluate_with(const Expr& e, Lookup&& lookup) {
  return std::visit(
      detail::overloaded{
          [&](const ExprNode::Constant& c) { return c.value; },
          [&](const ExprNode::Variable& x) {
            return lookup(std::string_view(x.name));
          },
          [&](const ExprNode::Unary& u) {
            return apply(u.op, evaluate_with(u.operand, lookup));
          },
          [&](const ExprNode::Binary& b) {
            return apply(b.op, evaluate_with(b.lhs, lookup),
                         evaluate_with(b.rhs, lookup));
          }},
      e.node().v);
}

using Bindings = std::map<std::string, double, std::less<>>;

inline double evaluate(const Expr& e, const Bindings& bindings) {
  return evaluate_with(e, [&](std::string_view name) {
    auto it = bindings.find(name);
    if (it == bindings.end()) throw UnboundVariable(std::string(name));
    return it->second;
  });
}

// Deduplicated variable names in first-appearance order.
inline std::vector<std::string> variables(const Expr& e) {
  std::vector<std::string> out;
  auto walk = [&](auto&& self, const Expr& n) -> void {
    std::visit(detail::overloaded{
                   [&](const ExprNode::Constant&) {},
                   [&](const ExprNode::Variable& x) {
                     for (const auto& seen : out)
                       if (seen == x.name) return;
                     out.push_back(x.name);
                   },
                   [&](const ExprNode::Unary& u) { self(self, u.operand); },
                   [&](const ExprNode::Binary& b) {
                     self(self, b.lhs);
                     self(self, b.rhs);
                   }},
               n.node().v);
  };
  walk(walk, e);
  return out;
}

inline std::string_view function_name(UnaryOp op) {
  switch (op) {
    case UnaryOp::Neg:
      return "-";
    case UnaryOp::Sin:
      return "sin";
    case UnaryOp::Cos:
      return "cos";
    case UnaryOp::Exp:
      return "exp";
    case UnaryOp::Log:
      return "log";
    case UnaryOp::Sqrt:
      return "sqrt";
    case UnaryOp::Abs:
      return "abs";
  }
  return "";  // unreachable
}

namespace detail {

// Shortest decimal form that re-parses to the exact same double.
inline std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// Binding strength used by the printer. Atoms bind tightest; the grammar
// orders add/sub < mul/div < unary minus < pow < atom.
inline int precedence(const Expr& e) {
  return std::visit(
      overloaded{[&](const ExprNode::Constant& c) {
                   // Negative constants print with a leading '-', so they
                   // parenthesize like a negation.
                   return std::signbit(c.value) ? 3 : 5;
                 },
                 [&](const ExprNode::Variable&) { return 5; },
                 [&](const ExprNode::Unary& u) {
                   return u.op == UnaryOp::Neg ? 3 : 5;
                 },
                 [&](const ExprNode::Binary& b) {
                   switch (b.op) {
                     case BinaryOp::Add:
                     case BinaryOp::Sub:
                       return 1;
                     case BinaryOp::Mul:
                     case BinaryOp::Div:
                       return 2;
                     case BinaryOp::Pow:
                       return 4;
                   }
                   return 5;  // unreachable
                 }},
      e.node().v);
}

inline void print_to(const Expr& e, std::string& out);

inline void print_child(const Expr& child, int min_prec, std::string& out) {
  if (precedence(child) < min_prec) {
    out += '(';
    print_to(child, out);
    out += ')';
  } else {
    print_to(child, out);
  }
}

inline void print_to(const Expr& e, std::string& out) {
  std::visit(
      overloaded{
          [&](const ExprNode::Constant& c) { out += format_double(c.value); },
          [&](const ExprNode::Variable& x) { out += x.name; },
          [&](const ExprNode::Unary& u) {
            if (u.op == UnaryOp::Neg) {
              out += '-';
              print_child(u.operand, 3, out);
            } else {
              out += function_name(u.op);
              out += '(';
              print_to(u.operand, out);
              out += ')';
            }
          },
          [&](const ExprNode::Binary& b) {
            // Left-associative ops parenthesize an equal-precedence right
            // child (a - (b + c), a * (b / c)); right-associative pow
            // parenthesizes an equal-or-looser left child ((x^y)^z, (-x)^2).
            switch (b.op) {
              case BinaryOp::Add:
              case BinaryOp::Sub:
                print_child(b.lhs, 1, out);
                out += b.op == BinaryOp::Add ? " + " : " - ";
                print_child(b.rhs, 2, out);
                break;
              case BinaryOp::Mul:
              case BinaryOp::Div:
                print_child(b.lhs, 2, out);
                out += b.op == BinaryOp::Mul ? " * " : " / ";
                print_child(b.rhs, 3, out);
                break;
              case BinaryOp::Pow:
                print_child(b.lhs, 5, out);
                out += '^';
                // The exponent parses at unary level, so a negation needs
                // no parentheses there.
                print_child(b.rhs, 3, out);
                break;
            }
          }},
      e.node().v);
}

}  // namespace detail

// Minimal-parentheses rendering. parse(pretty_print(e)) reproduces e
// structurally for any tree the parser itself can produce; constants
// constructed programmatically with negative values render as a leading
// '-' and re-parse as a negation node.
inline std::string pretty_print(const Expr& e) {
  std::string out;
  detail::print_to(e, out);
  return out;
}

}  // namespace nonstat
