#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>

namespace cgvf::expr {

// Immutable expression tree over the variables w1..wm.
//
// Grammar (usual precedence, '^' right-associative):
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' unary)?
//   atom   := number | 'pi' | 'w'<index> | func '(' expr ')' | '(' expr ')'
//   func   := sin | cos | tan | exp | log | sqrt
class Expr {
 public:
  enum class Kind { Constant, Variable, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Tan, Exp, Log, Sqrt };

  Kind kind() const { return node_->kind; }

  double evaluate(std::span<const double> w) const;
  // Symbolic partial derivative with respect to w_{index+1}.
  Expr derivative(std::size_t index) const;
  // Largest variable index referenced plus one (0 for constants).
  std::size_t arity() const;
  bool is_constant() const;
  std::string to_string() const;

  static Expr constant(double value);
  static Expr variable(std::size_t index);

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr pow(const Expr& base, const Expr& exponent);
  static Expr unary(Kind kind, const Expr& arg);

 private:
  struct Node {
    Kind kind;
    double value = 0.0;
    std::size_t index = 0;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
  };
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Expr binary(Kind kind, const Expr& a, const Expr& b);
  Expr left() const { return Expr(node_->lhs); }
  Expr right() const { return Expr(node_->rhs); }
  double constant_value() const { return node_->value; }

  std::shared_ptr<const Node> node_;
};

// Throws ParseError with a 1-based column on malformed input.
Expr parse(std::string_view text);

}  // namespace cgvf::expr
