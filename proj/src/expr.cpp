#include "cgvf/expr.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cgvf/errors.hpp"

namespace cgvf::expr {

Expr Expr::constant(double value) {
  return Expr(std::make_shared<const Node>(Node{Kind::Constant, value, 0, nullptr, nullptr}));
}

Expr Expr::variable(std::size_t index) {
  return Expr(std::make_shared<const Node>(Node{Kind::Variable, 0.0, index, nullptr, nullptr}));
}

Expr Expr::binary(Kind kind, const Expr& a, const Expr& b) {
  return Expr(std::make_shared<const Node>(Node{kind, 0.0, 0, a.node_, b.node_}));
}

Expr Expr::unary(Kind kind, const Expr& arg) {
  return Expr(std::make_shared<const Node>(Node{kind, 0.0, 0, arg.node_, nullptr}));
}

bool Expr::is_constant() const { return kind() == Kind::Constant; }

// The arithmetic helpers fold constants and drop additive/multiplicative
// identities so derivative trees stay small.
Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.constant_value() + b.constant_value());
  if (a.is_constant() && a.constant_value() == 0.0) return b;
  if (b.is_constant() && b.constant_value() == 0.0) return a;
  return Expr::binary(Expr::Kind::Add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.constant_value() - b.constant_value());
  if (b.is_constant() && b.constant_value() == 0.0) return a;
  if (a.is_constant() && a.constant_value() == 0.0) return -b;
  return Expr::binary(Expr::Kind::Sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.constant_value() * b.constant_value());
  if ((a.is_constant() && a.constant_value() == 0.0) || (b.is_constant() && b.constant_value() == 0.0))
    return Expr::constant(0.0);
  if (a.is_constant() && a.constant_value() == 1.0) return b;
  if (b.is_constant() && b.constant_value() == 1.0) return a;
  return Expr::binary(Expr::Kind::Mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.constant_value() / b.constant_value());
  if (a.is_constant() && a.constant_value() == 0.0) return Expr::constant(0.0);
  if (b.is_constant() && b.constant_value() == 1.0) return a;
  return Expr::binary(Expr::Kind::Div, a, b);
}

Expr operator-(const Expr& a) {
  if (a.is_constant()) return Expr::constant(-a.constant_value());
  if (a.kind() == Expr::Kind::Neg) return a.left();
  return Expr::unary(Expr::Kind::Neg, a);
}

Expr pow(const Expr& base, const Expr& exponent) {
  if (base.is_constant() && exponent.is_constant())
    return Expr::constant(std::pow(base.constant_value(), exponent.constant_value()));
  if (exponent.is_constant() && exponent.constant_value() == 1.0) return base;
  if (exponent.is_constant() && exponent.constant_value() == 0.0) return Expr::constant(1.0);
  return Expr::binary(Expr::Kind::Pow, base, exponent);
}

double Expr::evaluate(std::span<const double> w) const {
  switch (kind()) {
    case Kind::Constant: return node_->value;
    case Kind::Variable:
      if (node_->index >= w.size()) {
        throw DimensionError("expression references w" + std::to_string(node_->index + 1) + " but only " +
                             std::to_string(w.size()) + " coordinates were supplied");
      }
      return w[node_->index];
    case Kind::Add: return left().evaluate(w) + right().evaluate(w);
    case Kind::Sub: return left().evaluate(w) - right().evaluate(w);
    case Kind::Mul: return left().evaluate(w) * right().evaluate(w);
    case Kind::Div: return left().evaluate(w) / right().evaluate(w);
    case Kind::Pow: return std::pow(left().evaluate(w), right().evaluate(w));
    case Kind::Neg: return -left().evaluate(w);
    case Kind::Sin: return std::sin(left().evaluate(w));
    case Kind::Cos: return std::cos(left().evaluate(w));
    case Kind::Tan: return std::tan(left().evaluate(w));
    case Kind::Exp: return std::exp(left().evaluate(w));
    case Kind::Log: return std::log(left().evaluate(w));
    case Kind::Sqrt: return std::sqrt(left().evaluate(w));
  }
  return 0.0;
}

Expr Expr::derivative(std::size_t index) const {
  switch (kind()) {
    case Kind::Constant: return constant(0.0);
    case Kind::Variable: return constant(node_->index == index ? 1.0 : 0.0);
    case Kind::Add: return left().derivative(index) + right().derivative(index);
    case Kind::Sub: return left().derivative(index) - right().derivative(index);
    case Kind::Mul: {
      const Expr a = left(), b = right();
      return a.derivative(index) * b + a * b.derivative(index);
    }
    case Kind::Div: {
      const Expr a = left(), b = right();
      return (a.derivative(index) * b - a * b.derivative(index)) / (b * b);
    }
    case Kind::Pow: {
      const Expr base = left(), exponent = right();
      const Expr dbase = base.derivative(index);
      const Expr dexp = exponent.derivative(index);
      if (dexp.is_constant() && dexp.constant_value() == 0.0) {
        return exponent * pow(base, exponent - constant(1.0)) * dbase;
      }
      // d(u^v) = u^v (v' ln u + v u' / u)
      return pow(base, exponent) * (dexp * unary(Kind::Log, base) + exponent * dbase / base);
    }
    case Kind::Neg: return -left().derivative(index);
    case Kind::Sin: return unary(Kind::Cos, left()) * left().derivative(index);
    case Kind::Cos: return -(unary(Kind::Sin, left()) * left().derivative(index));
    case Kind::Tan: {
      const Expr c = unary(Kind::Cos, left());
      return left().derivative(index) / (c * c);
    }
    case Kind::Exp: return unary(Kind::Exp, left()) * left().derivative(index);
    case Kind::Log: return left().derivative(index) / left();
    case Kind::Sqrt: return left().derivative(index) / (constant(2.0) * unary(Kind::Sqrt, left()));
  }
  return constant(0.0);
}

std::size_t Expr::arity() const {
  switch (kind()) {
    case Kind::Constant: return 0;
    case Kind::Variable: return node_->index + 1;
    default: {
      std::size_t a = left().arity();
      if (node_->rhs) a = std::max(a, right().arity());
      return a;
    }
  }
}

std::string Expr::to_string() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind()) {
    case Kind::Constant: os << node_->value; break;
    case Kind::Variable: os << 'w' << node_->index + 1; break;
    case Kind::Add: os << '(' << left().to_string() << " + " << right().to_string() << ')'; break;
    case Kind::Sub: os << '(' << left().to_string() << " - " << right().to_string() << ')'; break;
    case Kind::Mul: os << '(' << left().to_string() << " * " << right().to_string() << ')'; break;
    case Kind::Div: os << '(' << left().to_string() << " / " << right().to_string() << ')'; break;
    case Kind::Pow: os << '(' << left().to_string() << " ^ " << right().to_string() << ')'; break;
    case Kind::Neg: os << "(-" << left().to_string() << ')'; break;
    case Kind::Sin: os << "sin(" << left().to_string() << ')'; break;
    case Kind::Cos: os << "cos(" << left().to_string() << ')'; break;
    case Kind::Tan: os << "tan(" << left().to_string() << ')'; break;
    case Kind::Exp: os << "exp(" << left().to_string() << ')'; break;
    case Kind::Log: os << "log(" << left().to_string() << ')'; break;
    case Kind::Sqrt: os << "sqrt(" << left().to_string() << ')'; break;
  }
  return os.str();
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse_all() {
    Expr e = parse_expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("expression \"" + std::string(text_) + "\": " + what + " at column " +
                         std::to_string(pos_ + 1),
                     0, static_cast<int>(pos_ + 1));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    for (;;) {
      if (accept('+')) lhs = lhs + parse_term();
      else if (accept('-')) lhs = lhs - parse_term();
      else return lhs;
    }
  }

  Expr parse_term() {
    Expr lhs = parse_unary();
    for (;;) {
      if (accept('*')) lhs = lhs * parse_unary();
      else if (accept('/')) lhs = lhs / parse_unary();
      else return lhs;
    }
  }

  Expr parse_unary() {
    if (accept('-')) return -parse_unary();
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_atom();
    if (accept('^')) return pow(base, parse_unary());
    return base;
  }

  Expr parse_atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = parse_expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
      ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
        pos_ = look;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    const std::string token(text_.substr(start, pos_ - start));
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(token, &used);
    } catch (const std::exception&) {
      pos_ = start;
      fail("malformed number '" + token + "'");
    }
    if (used != token.size()) {
      pos_ = start;
      fail("malformed number '" + token + "'");
    }
    return Expr::constant(value);
  }

  Expr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "pi") return Expr::constant(std::numbers::pi);
    if (name.size() >= 2 && name[0] == 'w') {
      std::size_t index = 0;
      for (char d : name.substr(1)) {
        if (!std::isdigit(static_cast<unsigned char>(d))) {
          pos_ = start;
          fail("unknown identifier '" + std::string(name) + "'");
        }
        index = index * 10 + static_cast<std::size_t>(d - '0');
      }
      if (index == 0) {
        pos_ = start;
        fail("variables are numbered from w1");
      }
      return Expr::variable(index - 1);
    }
    Expr::Kind kind;
    if (name == "sin") kind = Expr::Kind::Sin;
    else if (name == "cos") kind = Expr::Kind::Cos;
    else if (name == "tan") kind = Expr::Kind::Tan;
    else if (name == "exp") kind = Expr::Kind::Exp;
    else if (name == "log") kind = Expr::Kind::Log;
    else if (name == "sqrt") kind = Expr::Kind::Sqrt;
    else {
      pos_ = start;
      fail("unknown identifier '" + std::string(name) + "'");
    }
    expect('(');
    Expr arg = parse_expr();
    expect(')');
    return Expr::unary(kind, arg);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text) { return Parser(text).parse_all(); }

}  // namespace cgvf::expr
