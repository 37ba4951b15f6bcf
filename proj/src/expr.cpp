#include "riccisol/expr.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <sstream>

namespace riccisol {

struct Expr::Node {
  Kind kind;
  double value = 0.0;  // Constant
  int index = -1;      // Variable
  UnaryOp uop = UnaryOp::Neg;
  BinaryOp bop = BinaryOp::Add;
  std::shared_ptr<const Node> a, b;
};

Expr Expr::constant(double value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Constant;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::variable(int index) {
  if (index < 0) throw std::invalid_argument("variable index must be non-negative");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Variable;
  n->index = index;
  return Expr(std::move(n));
}

Expr Expr::unary(UnaryOp op, Expr a) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Unary;
  n->uop = op;
  n->a = std::move(a.node_);
  return Expr(std::move(n));
}

Expr Expr::binary(BinaryOp op, Expr a, Expr b) {
  if (op == BinaryOp::Pow && b.kind() != Kind::Constant)
    throw std::invalid_argument("pow exponent must be a constant");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Binary;
  n->bop = op;
  n->a = std::move(a.node_);
  n->b = std::move(b.node_);
  return Expr(std::move(n));
}

Expr::Kind Expr::kind() const { return node_->kind; }
double Expr::constant_value() const { return node_->value; }
int Expr::variable_index() const { return node_->index; }
UnaryOp Expr::unary_op() const { return node_->uop; }
BinaryOp Expr::binary_op() const { return node_->bop; }
Expr Expr::left() const { return Expr(node_->a); }
Expr Expr::right() const { return Expr(node_->b); }

int Expr::max_variable() const {
  switch (kind()) {
    case Kind::Constant: return -1;
    case Kind::Variable: return variable_index();
    case Kind::Unary: return left().max_variable();
    case Kind::Binary: return std::max(left().max_variable(), right().max_variable());
  }
  return -1;
}

// ---------------------------------------------------------------------------
// Simplifying builders

Expr operator-(Expr a) {
  if (a.is_constant()) return Expr::constant(-a.constant_value());
  if (a.kind() == Expr::Kind::Unary && a.unary_op() == UnaryOp::Neg) return a.left();
  return Expr::unary(UnaryOp::Neg, std::move(a));
}

namespace {

// Folding must never materialize a non-finite constant: such a node would
// print as "inf"/"nan", which does not re-parse.
bool foldable(double v) { return std::isfinite(v); }

}  // namespace

Expr operator+(Expr a, Expr b) {
  if (a.is_constant() && b.is_constant() && foldable(a.constant_value() + b.constant_value()))
    return Expr::constant(a.constant_value() + b.constant_value());
  if (a.is_constant(0.0)) return b;
  if (b.is_constant(0.0)) return a;
  return Expr::binary(BinaryOp::Add, std::move(a), std::move(b));
}

Expr operator-(Expr a, Expr b) {
  if (a.is_constant() && b.is_constant() && foldable(a.constant_value() - b.constant_value()))
    return Expr::constant(a.constant_value() - b.constant_value());
  if (b.is_constant(0.0)) return a;
  if (a.is_constant(0.0)) return -std::move(b);
  return Expr::binary(BinaryOp::Sub, std::move(a), std::move(b));
}

Expr operator*(Expr a, Expr b) {
  if (a.is_constant() && b.is_constant() && foldable(a.constant_value() * b.constant_value()))
    return Expr::constant(a.constant_value() * b.constant_value());
  if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr::constant(0.0);
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  return Expr::binary(BinaryOp::Mul, std::move(a), std::move(b));
}

Expr operator/(Expr a, Expr b) {
  if (b.is_constant(1.0)) return a;
  if (a.is_constant(0.0)) return Expr::constant(0.0);
  if (a.is_constant() && b.is_constant() && b.constant_value() != 0.0 &&
      foldable(a.constant_value() / b.constant_value()))
    return Expr::constant(a.constant_value() / b.constant_value());
  return Expr::binary(BinaryOp::Div, std::move(a), std::move(b));
}

namespace {

// Fold f(c) when c is inside the function's real domain and the result is finite.
Expr fold_unary(UnaryOp op, const Expr& a) {
  const double v = a.constant_value();
  double r = 0.0;
  switch (op) {
    case UnaryOp::Neg: r = -v; break;
    case UnaryOp::Exp: r = std::exp(v); break;
    case UnaryOp::Ln:
      if (v <= 0.0) return Expr::unary(op, a);
      r = std::log(v);
      break;
    case UnaryOp::Sin: r = std::sin(v); break;
    case UnaryOp::Cos: r = std::cos(v); break;
    case UnaryOp::Tan: r = std::tan(v); break;
    case UnaryOp::Sinh: r = std::sinh(v); break;
    case UnaryOp::Cosh: r = std::cosh(v); break;
    case UnaryOp::Tanh: r = std::tanh(v); break;
    case UnaryOp::Sqrt:
      if (v < 0.0) return Expr::unary(op, a);
      r = std::sqrt(v);
      break;
  }
  if (!std::isfinite(r)) return Expr::unary(op, a);
  return Expr::constant(r);
}

Expr build_unary(UnaryOp op, Expr a) {
  if (op == UnaryOp::Neg) return -std::move(a);
  if (a.is_constant()) return fold_unary(op, a);
  return Expr::unary(op, std::move(a));
}

}  // namespace

Expr exp(Expr a) { return build_unary(UnaryOp::Exp, std::move(a)); }
Expr ln(Expr a) { return build_unary(UnaryOp::Ln, std::move(a)); }
Expr sin(Expr a) { return build_unary(UnaryOp::Sin, std::move(a)); }
Expr cos(Expr a) { return build_unary(UnaryOp::Cos, std::move(a)); }
Expr tan(Expr a) { return build_unary(UnaryOp::Tan, std::move(a)); }
Expr sinh(Expr a) { return build_unary(UnaryOp::Sinh, std::move(a)); }
Expr cosh(Expr a) { return build_unary(UnaryOp::Cosh, std::move(a)); }
Expr tanh(Expr a) { return build_unary(UnaryOp::Tanh, std::move(a)); }
Expr sqrt(Expr a) { return build_unary(UnaryOp::Sqrt, std::move(a)); }

Expr pow(Expr base, double exponent) {
  if (exponent == 0.0) return Expr::constant(1.0);
  if (exponent == 1.0) return base;
  if (base.is_constant()) {
    const double r = std::pow(base.constant_value(), exponent);
    if (std::isfinite(r)) return Expr::constant(r);
  }
  return Expr::binary(BinaryOp::Pow, std::move(base), Expr::constant(exponent));
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Expr::Kind::Constant: return a.constant_value() == b.constant_value();
    case Expr::Kind::Variable: return a.variable_index() == b.variable_index();
    case Expr::Kind::Unary:
      return a.unary_op() == b.unary_op() && structurally_equal(a.left(), b.left());
    case Expr::Kind::Binary:
      return a.binary_op() == b.binary_op() && structurally_equal(a.left(), b.left()) &&
             structurally_equal(a.right(), b.right());
  }
  return false;
}

Expr normalize(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Constant:
    case Expr::Kind::Variable:
      return e;
    case Expr::Kind::Unary:
      return build_unary(e.unary_op(), normalize(e.left()));
    case Expr::Kind::Binary: {
      Expr a = normalize(e.left());
      Expr b = normalize(e.right());
      switch (e.binary_op()) {
        case BinaryOp::Add: return std::move(a) + std::move(b);
        case BinaryOp::Sub: return std::move(a) - std::move(b);
        case BinaryOp::Mul: return std::move(a) * std::move(b);
        case BinaryOp::Div: return std::move(a) / std::move(b);
        case BinaryOp::Pow: return pow(std::move(a), b.constant_value());
      }
    }
  }
  return e;
}

// ---------------------------------------------------------------------------
// Differentiation

Expr differentiate(const Expr& e, int var) {
  if (var < 0) throw std::invalid_argument("derivative index must be non-negative");
  switch (e.kind()) {
    case Expr::Kind::Constant:
      return Expr::constant(0.0);
    case Expr::Kind::Variable:
      return Expr::constant(e.variable_index() == var ? 1.0 : 0.0);
    case Expr::Kind::Unary: {
      const Expr a = e.left();
      const Expr da = differentiate(a, var);
      switch (e.unary_op()) {
        case UnaryOp::Neg: return -da;
        case UnaryOp::Exp: return da * exp(a);
        case UnaryOp::Ln: return da / a;
        case UnaryOp::Sin: return da * cos(a);
        case UnaryOp::Cos: return -(da * sin(a));
        case UnaryOp::Tan: return da / pow(cos(a), 2.0);
        case UnaryOp::Sinh: return da * cosh(a);
        case UnaryOp::Cosh: return da * sinh(a);
        case UnaryOp::Tanh: return da / pow(cosh(a), 2.0);
        case UnaryOp::Sqrt: return da / (Expr::constant(2.0) * sqrt(a));
      }
      break;
    }
    case Expr::Kind::Binary: {
      const Expr a = e.left();
      const Expr b = e.right();
      switch (e.binary_op()) {
        case BinaryOp::Add: return differentiate(a, var) + differentiate(b, var);
        case BinaryOp::Sub: return differentiate(a, var) - differentiate(b, var);
        case BinaryOp::Mul: return differentiate(a, var) * b + a * differentiate(b, var);
        case BinaryOp::Div:
          return (differentiate(a, var) * b - a * differentiate(b, var)) / pow(b, 2.0);
        case BinaryOp::Pow: {
          const double c = b.constant_value();
          return Expr::constant(c) * pow(a, c - 1.0) * differentiate(a, var);
        }
      }
      break;
    }
  }
  return Expr::constant(0.0);
}

// ---------------------------------------------------------------------------
// Evaluation

EvalDomainError::EvalDomainError(std::string message, std::string subexpression,
                                 std::vector<double> point)
    : std::runtime_error(std::move(message)),
      subexpression_(std::move(subexpression)),
      point_(std::move(point)) {}

namespace {

[[noreturn]] void domain_error(const char* what, const Expr& sub, std::span<const double> p) {
  std::ostringstream msg;
  msg << what << " in subexpression '" << to_string(sub) << "' at point (";
  for (std::size_t i = 0; i < p.size(); ++i) msg << (i ? ", " : "") << p[i];
  msg << ")";
  throw EvalDomainError(msg.str(), to_string(sub), std::vector<double>(p.begin(), p.end()));
}

double eval_rec(const Expr& e, std::span<const double> p) {
  switch (e.kind()) {
    case Expr::Kind::Constant:
      return e.constant_value();
    case Expr::Kind::Variable: {
      const int i = e.variable_index();
      if (static_cast<std::size_t>(i) >= p.size())
        throw std::invalid_argument("point has " + std::to_string(p.size()) +
                                    " coordinates but expression references x" +
                                    std::to_string(i + 1));
      return p[static_cast<std::size_t>(i)];
    }
    case Expr::Kind::Unary: {
      const double a = eval_rec(e.left(), p);
      switch (e.unary_op()) {
        case UnaryOp::Neg: return -a;
        case UnaryOp::Exp: return std::exp(a);
        case UnaryOp::Ln:
          if (a <= 0.0) domain_error("ln of non-positive value", e, p);
          return std::log(a);
        case UnaryOp::Sin: return std::sin(a);
        case UnaryOp::Cos: return std::cos(a);
        case UnaryOp::Tan: return std::tan(a);
        case UnaryOp::Sinh: return std::sinh(a);
        case UnaryOp::Cosh: return std::cosh(a);
        case UnaryOp::Tanh: return std::tanh(a);
        case UnaryOp::Sqrt:
          if (a < 0.0) domain_error("sqrt of negative value", e, p);
          return std::sqrt(a);
      }
      break;
    }
    case Expr::Kind::Binary: {
      const double a = eval_rec(e.left(), p);
      switch (e.binary_op()) {
        case BinaryOp::Add: return a + eval_rec(e.right(), p);
        case BinaryOp::Sub: return a - eval_rec(e.right(), p);
        case BinaryOp::Mul: return a * eval_rec(e.right(), p);
        case BinaryOp::Div: {
          const double b = eval_rec(e.right(), p);
          if (b == 0.0) domain_error("division by zero", e, p);
          return a / b;
        }
        case BinaryOp::Pow: {
          const double c = e.right().constant_value();
          if (a == 0.0 && c < 0.0) domain_error("zero base with negative exponent", e, p);
          if (a < 0.0 && c != std::floor(c))
            domain_error("negative base with non-integer exponent", e, p);
          return std::pow(a, c);
        }
      }
      break;
    }
  }
  return 0.0;
}

}  // namespace

double evaluate(const Expr& e, std::span<const double> point) { return eval_rec(e, point); }

// ---------------------------------------------------------------------------
// Printing

namespace {

// Parenthesization precedence: + - (1)  < * / (2)  < unary minus (3)  < ^ (4) < atoms (5).
int precedence(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Constant:
      return e.constant_value() < 0.0 ? 3 : 5;  // "-2" binds like unary minus
    case Expr::Kind::Variable:
      return 5;
    case Expr::Kind::Unary:
      return e.unary_op() == UnaryOp::Neg ? 3 : 5;
    case Expr::Kind::Binary:
      switch (e.binary_op()) {
        case BinaryOp::Add:
        case BinaryOp::Sub: return 1;
        case BinaryOp::Mul:
        case BinaryOp::Div: return 2;
        case BinaryOp::Pow: return 4;
      }
  }
  return 5;
}

const char* unary_name(UnaryOp op) {
  switch (op) {
    case UnaryOp::Neg: return "-";
    case UnaryOp::Exp: return "exp";
    case UnaryOp::Ln: return "ln";
    case UnaryOp::Sin: return "sin";
    case UnaryOp::Cos: return "cos";
    case UnaryOp::Tan: return "tan";
    case UnaryOp::Sinh: return "sinh";
    case UnaryOp::Cosh: return "cosh";
    case UnaryOp::Tanh: return "tanh";
    case UnaryOp::Sqrt: return "sqrt";
  }
  return "?";
}

void print_number(std::string& out, double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

void print_rec(std::string& out, const Expr& e, std::span<const std::string> names) {
  switch (e.kind()) {
    case Expr::Kind::Constant:
      print_number(out, e.constant_value());
      return;
    case Expr::Kind::Variable: {
      const auto i = static_cast<std::size_t>(e.variable_index());
      if (i < names.size()) {
        out += names[i];
      } else {
        out += 'x';
        out += std::to_string(i + 1);
      }
      return;
    }
    case Expr::Kind::Unary: {
      if (e.unary_op() == UnaryOp::Neg) {
        out += '-';
        const bool parens = precedence(e.left()) < 3;
        if (parens) out += '(';
        print_rec(out, e.left(), names);
        if (parens) out += ')';
      } else {
        out += unary_name(e.unary_op());
        out += '(';
        print_rec(out, e.left(), names);
        out += ')';
      }
      return;
    }
    case Expr::Kind::Binary: {
      const int p = precedence(e);
      const char op = e.binary_op() == BinaryOp::Add   ? '+'
                      : e.binary_op() == BinaryOp::Sub ? '-'
                      : e.binary_op() == BinaryOp::Mul ? '*'
                      : e.binary_op() == BinaryOp::Div ? '/'
                                                       : '^';
      const bool lp = precedence(e.left()) < p;
      if (lp) out += '(';
      print_rec(out, e.left(), names);
      if (lp) out += ')';
      out += op;
      if (e.binary_op() == BinaryOp::Pow) {
        print_number(out, e.right().constant_value());  // "x^-2" re-parses
      } else {
        const bool rp = precedence(e.right()) <= p;
        if (rp) out += '(';
        print_rec(out, e.right(), names);
        if (rp) out += ')';
      }
      return;
    }
  }
}

}  // namespace

std::string to_string(const Expr& e) { return to_string(e, {}); }

std::string to_string(const Expr& e, std::span<const std::string> names) {
  std::string out;
  print_rec(out, e, names);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

LineColumn line_column(std::string_view text, std::size_t offset) {
  LineColumn lc;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++lc.line;
      lc.column = 1;
    } else {
      ++lc.column;
    }
  }
  return lc;
}

ParseError::ParseError(std::string message, SourceSpan span)
    : std::runtime_error(std::move(message)), span_(span) {}

namespace {

struct Token {
  enum class Type { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
  Type type;
  SourceSpan span;
  double number = 0.0;
  std::string_view ident;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, std::size_t at) const {
    const auto lc = line_column(text_, at);
    throw ParseError("syntax error at " + std::to_string(lc.line) + ":" +
                         std::to_string(lc.column) + ": " + msg,
                     {at, std::min(at + 1, text_.size())});
  }

  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::size_t start = pos_;
    if (pos_ >= text_.size()) {
      tok_ = {Token::Type::End, {start, start}, 0.0, {}};
      return;
    }
    const char c = text_[pos_];
    auto single = [&](Token::Type t) {
      ++pos_;
      tok_ = {t, {start, pos_}, 0.0, {}};
    };
    switch (c) {
      case '+': single(Token::Type::Plus); return;
      case '-': single(Token::Type::Minus); return;
      case '*': single(Token::Type::Star); return;
      case '/': single(Token::Type::Slash); return;
      case '^': single(Token::Type::Caret); return;
      case '(': single(Token::Type::LParen); return;
      case ')': single(Token::Type::RParen); return;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double value = 0.0;
      auto res = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
      if (res.ec != std::errc{}) fail("malformed number", start);
      pos_ = static_cast<std::size_t>(res.ptr - text_.data());
      tok_ = {Token::Type::Number, {start, pos_}, value, {}};
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      tok_ = {Token::Type::Ident, {start, pos_}, 0.0, text_.substr(start, pos_ - start)};
      return;
    }
    fail(std::string("unexpected character '") + c + "'", start);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Token tok_;
};

std::optional<UnaryOp> function_by_name(std::string_view name) {
  if (name == "exp") return UnaryOp::Exp;
  if (name == "ln") return UnaryOp::Ln;
  if (name == "sin") return UnaryOp::Sin;
  if (name == "cos") return UnaryOp::Cos;
  if (name == "tan") return UnaryOp::Tan;
  if (name == "sinh") return UnaryOp::Sinh;
  if (name == "cosh") return UnaryOp::Cosh;
  if (name == "tanh") return UnaryOp::Tanh;
  if (name == "sqrt") return UnaryOp::Sqrt;
  return std::nullopt;
}

// Evaluate a closed (variable-free) subtree; nullopt if any variable occurs
// or the arithmetic leaves the real domain.
std::optional<double> closed_value(const Expr& e) {
  if (e.max_variable() >= 0) return std::nullopt;
  try {
    return evaluate(e, {});
  } catch (const EvalDomainError&) {
    return std::nullopt;
  }
}

class Parser {
 public:
  Parser(std::string_view text, int dim, std::span<const std::string> names)
      : text_(text), lex_(text), dim_(dim), names_(names) {}

  Expr parse() {
    Expr e = parse_sum();
    const Token& t = lex_.peek();
    if (t.type != Token::Type::End) fail("unexpected token", t.span);
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, SourceSpan span) const {
    const auto lc = line_column(text_, span.begin);
    throw ParseError(
        "syntax error at " + std::to_string(lc.line) + ":" + std::to_string(lc.column) + ": " + msg,
        span);
  }

  Expr parse_sum() {
    Expr e = parse_term();
    while (true) {
      const auto t = lex_.peek().type;
      if (t == Token::Type::Plus) {
        lex_.take();
        e = Expr::binary(BinaryOp::Add, e, parse_term());
      } else if (t == Token::Type::Minus) {
        lex_.take();
        e = Expr::binary(BinaryOp::Sub, e, parse_term());
      } else {
        return e;
      }
    }
  }

  Expr parse_term() {
    Expr e = parse_factor();
    while (true) {
      const auto t = lex_.peek().type;
      if (t == Token::Type::Star) {
        lex_.take();
        e = Expr::binary(BinaryOp::Mul, e, parse_factor());
      } else if (t == Token::Type::Slash) {
        lex_.take();
        e = Expr::binary(BinaryOp::Div, e, parse_factor());
      } else {
        return e;
      }
    }
  }

  // Unary minus binds tighter than * and / but looser than ^.
  Expr parse_factor() {
    if (lex_.peek().type == Token::Type::Minus) {
      lex_.take();
      return Expr::unary(UnaryOp::Neg, parse_factor());
    }
    return parse_power();
  }

  Expr parse_power() {
    Expr e = parse_atom();
    while (lex_.peek().type == Token::Type::Caret) {
      lex_.take();
      bool negate = false;
      if (lex_.peek().type == Token::Type::Minus) {
        lex_.take();
        negate = true;
      }
      const SourceSpan span = lex_.peek().span;
      Expr raw = parse_atom();
      auto v = closed_value(raw);
      if (!v) fail("exponent of '^' must be a constant", span);
      e = Expr::binary(BinaryOp::Pow, e, Expr::constant(negate ? -*v : *v));
    }
    return e;
  }

  Expr parse_atom() {
    Token t = lex_.take();
    switch (t.type) {
      case Token::Type::Number:
        return Expr::constant(t.number);
      case Token::Type::LParen: {
        Expr e = parse_sum();
        const Token close = lex_.take();
        if (close.type != Token::Type::RParen) fail("expected ')'", close.span);
        return e;
      }
      case Token::Type::Ident: {
        if (lex_.peek().type == Token::Type::LParen) {
          auto fn = function_by_name(t.ident);
          if (!fn) fail("unknown function '" + std::string(t.ident) + "'", t.span);
          lex_.take();
          Expr arg = parse_sum();
          const Token close = lex_.take();
          if (close.type != Token::Type::RParen) fail("expected ')'", close.span);
          return Expr::unary(*fn, std::move(arg));
        }
        return resolve_variable(t);
      }
      default:
        fail("expected a number, name, or '('", t.span);
    }
  }

  Expr resolve_variable(const Token& t) {
    const std::string_view name = t.ident;
    // Explicit chart coordinate names take priority.
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i] == name) return Expr::variable(static_cast<int>(i));
    }
    // Canonical names x1..xdim.
    if (name.size() >= 2 && name[0] == 'x' &&
        std::all_of(name.begin() + 1, name.end(),
                    [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      const int k = std::atoi(std::string(name.substr(1)).c_str());
      if (k < 1 || k > dim_)
        fail("variable index out of range: '" + std::string(name) + "' with dimension " +
                 std::to_string(dim_),
             t.span);
      return Expr::variable(k - 1);
    }
    // Positional aliases for low dimensions.
    if (name.size() == 1 && dim_ <= 4) {
      const int k = name[0] == 'x' ? 0 : name[0] == 'y' ? 1 : name[0] == 'z' ? 2 : name[0] == 't' ? 3 : -1;
      if (k >= 0) {
        if (k >= dim_)
          fail("variable index out of range: '" + std::string(name) + "' with dimension " +
                   std::to_string(dim_),
               t.span);
        return Expr::variable(k);
      }
    }
    fail("unknown identifier '" + std::string(name) + "'", t.span);
  }

  std::string_view text_;
  Lexer lex_;
  int dim_;
  std::span<const std::string> names_;
};

}  // namespace

Expr parse_expr(std::string_view text, int dim) {
  if (dim < 1) throw std::invalid_argument("dimension must be positive");
  return Parser(text, dim, {}).parse();
}

Expr parse_expr(std::string_view text, std::span<const std::string> coord_names) {
  return Parser(text, static_cast<int>(coord_names.size()), coord_names).parse();
}

// ---------------------------------------------------------------------------
// Derivative tables

DerivativeTable::DerivativeTable(Expr root, int dim, int max_order)
    : dim_(dim), max_order_(max_order) {
  if (dim < 1) throw std::invalid_argument("derivative table dimension must be positive");
  if (max_order < 0 || max_order > 4)
    throw std::invalid_argument("derivative table order must be in [0, 4]");
  if (root.max_variable() >= dim)
    throw std::invalid_argument("expression references a coordinate beyond the table dimension");

  entries_.emplace(std::vector<int>{}, root);
  // Extend order by order: the entry for the sorted index (i1 <= ... <= ik)
  // is d_{ik} applied to the entry for (i1 <= ... <= i(k-1)).
  std::vector<std::vector<int>> frontier{{}};
  for (int order = 1; order <= max_order; ++order) {
    std::vector<std::vector<int>> next;
    for (const auto& key : frontier) {
      const int lo = key.empty() ? 0 : key.back();
      for (int i = lo; i < dim; ++i) {
        std::vector<int> extended = key;
        extended.push_back(i);
        Expr d = differentiate(entries_.at(key), i);
        entries_.emplace(extended, std::move(d));
        next.push_back(std::move(extended));
      }
    }
    frontier = std::move(next);
  }
}

const Expr& DerivativeTable::entry(const std::vector<int>& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end())
    throw std::out_of_range("derivative table has no entry of order " +
                            std::to_string(key.size()));
  return it->second;
}

const Expr& DerivativeTable::partial(std::span<const int> indices) const {
  std::vector<int> key(indices.begin(), indices.end());
  for (int i : key) {
    if (i < 0 || i >= dim_) throw std::out_of_range("derivative index out of range");
  }
  std::sort(key.begin(), key.end());
  return entry(key);
}

}  // namespace riccisol
