#pragma once

#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace riccisol {

/// Half-open byte range [begin, end) into the source text of a parsed expression.
struct SourceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct LineColumn {
  std::size_t line = 1;    // 1-based
  std::size_t column = 1;  // 1-based, in bytes
};

/// Line/column of a byte offset within `text`.
LineColumn line_column(std::string_view text, std::size_t offset);

enum class UnaryOp { Neg, Exp, Ln, Sin, Cos, Tan, Sinh, Cosh, Tanh, Sqrt };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

/// Immutable abstract syntax tree of a smooth scalar expression in chart
/// coordinates x1..xn. Nodes are shared; copying an Expr is cheap and all
/// operations on it are pure, so Expr values may be used from many threads.
///
/// Pow is restricted to constant exponents so that differentiation stays
/// closed over the grammar; general f^g must be written exp(g*ln(f)).
class Expr {
 public:
  enum class Kind { Constant, Variable, Unary, Binary };

  Expr() : Expr(constant(0.0)) {}

  static Expr constant(double value);
  static Expr variable(int index);
  /// Structural constructors: no simplification is applied.
  static Expr unary(UnaryOp op, Expr a);
  static Expr binary(BinaryOp op, Expr a, Expr b);  // throws if Pow exponent non-constant

  Kind kind() const;
  double constant_value() const;  // requires Kind::Constant
  int variable_index() const;     // requires Kind::Variable
  UnaryOp unary_op() const;       // requires Kind::Unary
  BinaryOp binary_op() const;     // requires Kind::Binary
  Expr left() const;              // unary child or binary lhs
  Expr right() const;             // binary rhs

  bool is_constant() const { return kind() == Kind::Constant; }
  bool is_constant(double v) const { return is_constant() && constant_value() == v; }

  /// Largest variable index referenced, or -1 for a closed expression.
  int max_variable() const;

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Simplifying builders: constant folding plus the 0/1 identities. These are
// what differentiate() and normalize() construct through.
Expr operator-(Expr a);
Expr operator+(Expr a, Expr b);
Expr operator-(Expr a, Expr b);
Expr operator*(Expr a, Expr b);
Expr operator/(Expr a, Expr b);
inline Expr operator+(Expr a, double b) { return std::move(a) + Expr::constant(b); }
inline Expr operator+(double a, Expr b) { return Expr::constant(a) + std::move(b); }
inline Expr operator-(Expr a, double b) { return std::move(a) - Expr::constant(b); }
inline Expr operator-(double a, Expr b) { return Expr::constant(a) - std::move(b); }
inline Expr operator*(Expr a, double b) { return std::move(a) * Expr::constant(b); }
inline Expr operator*(double a, Expr b) { return Expr::constant(a) * std::move(b); }
inline Expr operator/(Expr a, double b) { return std::move(a) / Expr::constant(b); }
inline Expr operator/(double a, Expr b) { return Expr::constant(a) / std::move(b); }

Expr exp(Expr a);
Expr ln(Expr a);
Expr sin(Expr a);
Expr cos(Expr a);
Expr tan(Expr a);
Expr sinh(Expr a);
Expr cosh(Expr a);
Expr tanh(Expr a);
Expr sqrt(Expr a);
Expr pow(Expr base, double exponent);

/// Structural equality (same shape, same ops, constants compared with ==).
bool structurally_equal(const Expr& a, const Expr& b);

/// Bottom-up rebuild through the simplifying builders: constant folding and
/// the 0/1 identities only, no reassociation and no canonical ordering.
/// Correctness elsewhere is judged by evaluation, not symbolic form.
Expr normalize(const Expr& e);

/// Exact symbolic partial derivative with respect to coordinate `var`.
/// Total on valid expressions; differentiating a constant yields constant 0.
Expr differentiate(const Expr& e, int var);

class EvalDomainError : public std::runtime_error {
 public:
  EvalDomainError(std::string message, std::string subexpression, std::vector<double> point);
  const std::string& subexpression() const { return subexpression_; }
  const std::vector<double>& point() const { return point_; }

 private:
  std::string subexpression_;
  std::vector<double> point_;
};

/// IEEE double value of `e` at `point`. Throws EvalDomainError for ln of a
/// non-positive value, sqrt of a negative value, division by zero, and
/// negative base with non-integer exponent; throws std::invalid_argument if
/// the point has fewer coordinates than the expression references.
double evaluate(const Expr& e, std::span<const double> point);

/// Infix form that re-parses to a structurally equal tree (after
/// normalization on both sides). Coordinates print as x1..xn unless names
/// are supplied.
std::string to_string(const Expr& e);
std::string to_string(const Expr& e, std::span<const std::string> names);

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, SourceSpan span);
  SourceSpan span() const { return span_; }

 private:
  SourceSpan span_;
};

/// Parse an expression over coordinates x1..xdim. For dim <= 4 the aliases
/// x, y, z, t are accepted positionally. Grammar: infix with precedence
/// ^  >  unary minus  >  * /  >  + -, left-associative binaries,
/// parentheses, and call syntax name(expr) for the unary functions.
Expr parse_expr(std::string_view text, int dim);

/// Same grammar, but identifiers resolve against explicit coordinate names
/// first (canonical xk names and positional aliases stay available when they
/// do not collide).
Expr parse_expr(std::string_view text, std::span<const std::string> coord_names);

/// All mixed partial derivatives of one expression up to max_order, keyed by
/// the sorted multi-index, so the entry for d_i d_j is the very same Expr as
/// for d_j d_i. Built once, then immutable.
class DerivativeTable {
 public:
  DerivativeTable(Expr root, int dim, int max_order);

  const Expr& root() const { return entry({}); }
  int dim() const { return dim_; }
  int max_order() const { return max_order_; }

  /// Mixed partial for the given derivative indices (any order, size <= max_order).
  const Expr& partial(std::span<const int> indices) const;
  const Expr& partial(std::initializer_list<int> indices) const {
    return partial(std::span<const int>(indices.begin(), indices.size()));
  }

 private:
  const Expr& entry(const std::vector<int>& key) const;
  int dim_;
  int max_order_;
  std::map<std::vector<int>, Expr> entries_;
};

}  // namespace riccisol
