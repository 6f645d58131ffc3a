#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace surfhol::expr {

/// Variable reference: coordinate x<index> (1-based), or a surface parameter t / s.
struct Var {
  enum class Kind { coord, t, s };
  Kind kind = Kind::coord;
  int index = 0;

  static Var coord(int i) { return {Kind::coord, i}; }
  static Var t() { return {Kind::t, 0}; }
  static Var s() { return {Kind::s, 0}; }
  std::string name() const;

  friend bool operator==(const Var&, const Var&) = default;
};

/// Parses "x3", "t" or "s". Throws std::invalid_argument otherwise.
Var parse_var(std::string_view name);

class ParseError : public std::runtime_error {
 public:
  enum class Kind { syntax, unknown_identifier, arity };
  ParseError(Kind kind, std::size_t offset, const std::string& what);
  Kind kind() const { return kind_; }
  /// Byte offset into the source where the problem was detected.
  std::size_t offset() const { return offset_; }

 private:
  Kind kind_;
  std::size_t offset_;
};

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Values for the variables of an expression. Unset entries are unbound.
struct Bindings {
  std::span<const double> x;
  std::optional<double> t;
  std::optional<double> s;
};

struct Node;

/// Immutable expression tree over literals, x1..xn, t, s, + - * / ^, unary minus
/// and sin/cos/exp. Copies share structure.
class Expr {
 public:
  static Expr number(double value);
  static Expr variable(Var v);

  double eval(const Bindings& b) const;
  double eval(std::span<const double> x) const { return eval(Bindings{x, std::nullopt, std::nullopt}); }

  /// Symbolic derivative. Literal 0/1 factors and 0 terms are dropped while
  /// building; there is no other simplification.
  Expr derivative(Var v) const;

  std::string to_string() const;
  bool is_constant() const;
  bool is_zero_literal() const;

  const Node& node() const { return *node_; }

  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

 private:
  std::shared_ptr<const Node> node_;
};

/// Recursive-descent parser. `dim` bounds the coordinate index (x1..x<dim>).
///
/// Precedence, low to high: + -, * /, unary -, ^ (right associative), atoms.
/// The exponent of ^ must reduce to a numeric literal.
Expr parse(std::string_view src, int dim);

}  // namespace surfhol::expr
