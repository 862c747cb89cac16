#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "engelkit/rational.hpp"

namespace engelkit {

enum class ExprKind : std::uint8_t {
  Rational,
  Named,  // pi or a declared parameter
  Coord,
  Sum,
  Product,
  Quotient,
  Power,
  Sin,
  Cos,
  Exp,
  Ln,
  Negate,
};

// Immutable scalar expression tree with shared subtrees. A default-constructed
// Expr is the rational literal 0.
class Expr {
 public:
  Expr();

  static Expr rational(Rational q);
  static Expr integer(long v);
  static Expr named(std::string name);
  static Expr pi();
  static Expr coord(std::string name);
  static Expr sum(std::vector<Expr> terms);
  static Expr product(std::vector<Expr> factors);
  static Expr quotient(Expr numerator, Expr denominator);
  static Expr power(Expr base, int exponent);
  static Expr sin(Expr arg);
  static Expr cos(Expr arg);
  static Expr exp(Expr arg);
  static Expr ln(Expr arg);
  static Expr negate(Expr arg);

  ExprKind kind() const;
  const Rational& value() const;     // Rational nodes
  const std::string& name() const;   // Named and Coord nodes
  int exponent() const;              // Power nodes
  std::span<const Expr> args() const;
  const Expr& arg(std::size_t i = 0) const;

  bool is_rational() const { return kind() == ExprKind::Rational; }
  bool is_zero_literal() const;
  bool is_one_literal() const;
  std::size_t hash() const;
  const void* id() const { return node_.get(); }

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node);
  static Expr make(ExprKind kind, std::vector<Expr> args, int exponent = 0);
  std::shared_ptr<const Node> node_;
};

// Structural total order: kind, then payload, then children.
int compare(const Expr& a, const Expr& b);
struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

// Prints in the parser's grammar; parse(to_string(e)) is structurally e.
std::string to_string(const Expr& e);

// Raw tree builders. They only fold literal arithmetic; call normalize() for
// canonical form.
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);

// Collects every Coord name (coords=true) or Named name (coords=false).
void collect_names(const Expr& e, bool coords, std::vector<std::string>& out);

}  // namespace engelkit
