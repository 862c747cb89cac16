#include "engelkit/expr.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <sstream>

#include "engelkit/error.hpp"

namespace engelkit {

// ---------------------------------------------------------------- rational

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw ParseError("empty number", 0);
  auto dot = s.find('.');
  if (dot == std::string::npos) {
    Rational q;
    if (q.set_str(s, 10) != 0) throw ParseError("malformed number '" + s + "'", 0);
    if (q.get_den() == 0) throw ParseError("zero denominator in '" + s + "'", 0);
    q.canonicalize();
    return q;
  }
  bool negative = s[0] == '-';
  std::string whole = s.substr(negative ? 1 : 0, dot - (negative ? 1 : 0));
  std::string frac = s.substr(dot + 1);
  if (whole.empty()) whole = "0";
  if (frac.empty()) frac = "0";
  for (char c : whole + frac)
    if (c < '0' || c > '9') throw ParseError("malformed number '" + s + "'", 0);
  mpz_class num(whole + frac, 10);
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
  Rational q(num, den);
  q.canonicalize();
  if (negative) q = -q;
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }
double to_double(const Rational& q) { return q.get_d(); }
bool is_integer(const Rational& q) { return q.get_den() == 1; }

std::string to_string(const Witness& w) {
  std::ostringstream os;
  os.precision(6);
  for (std::size_t i = 0; i < w.point.size(); ++i) {
    if (i) os << ", ";
    os << w.point[i].first << "=" << w.point[i].second;
  }
  os << (w.point.empty() ? "" : " ") << "value=" << w.value;
  return os.str();
}

// ---------------------------------------------------------------- nodes

struct Expr::Node {
  ExprKind kind{};
  Rational q;
  std::string name;
  int exponent = 0;
  std::vector<Expr> args;
  std::size_t hash = 0;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

Expr::Expr() : Expr(rational(Rational(0))) {}
Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

static std::size_t hash_of(ExprKind kind, const Rational& q, const std::string& name, int exponent,
                           const std::vector<Expr>& args) {
  std::size_t h = mix(0, static_cast<std::size_t>(kind));
  if (kind == ExprKind::Rational) {
    h = mix(h, std::hash<std::string>{}(q.get_str()));
  }
  if (!name.empty()) h = mix(h, std::hash<std::string>{}(name));
  h = mix(h, static_cast<std::size_t>(static_cast<long>(exponent) + 7919));
  for (const auto& a : args) h = mix(h, a.hash());
  return h;
}

Expr Expr::make(ExprKind kind, std::vector<Expr> args, int exponent) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->exponent = exponent;
  n->args = std::move(args);
  n->hash = hash_of(kind, n->q, n->name, exponent, n->args);
  return Expr(std::move(n));
}

Expr Expr::rational(Rational q) {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Rational;
  q.canonicalize();
  n->q = std::move(q);
  n->hash = hash_of(n->kind, n->q, n->name, 0, n->args);
  return Expr(std::move(n));
}

Expr Expr::integer(long v) { return rational(Rational(v)); }

Expr Expr::named(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Named;
  n->name = std::move(name);
  n->hash = hash_of(n->kind, n->q, n->name, 0, n->args);
  return Expr(std::move(n));
}

Expr Expr::pi() { return named("pi"); }

Expr Expr::coord(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Coord;
  n->name = std::move(name);
  n->hash = hash_of(n->kind, n->q, n->name, 0, n->args);
  return Expr(std::move(n));
}

Expr Expr::sum(std::vector<Expr> terms) {
  if (terms.empty()) return integer(0);
  if (terms.size() == 1) return terms.front();
  return make(ExprKind::Sum, std::move(terms));
}

Expr Expr::product(std::vector<Expr> factors) {
  if (factors.empty()) return integer(1);
  if (factors.size() == 1) return factors.front();
  return make(ExprKind::Product, std::move(factors));
}

Expr Expr::quotient(Expr numerator, Expr denominator) {
  if (numerator.is_rational() && denominator.is_rational()) {
    if (denominator.value() == 0) throw Error("division by the literal zero");
    return rational(numerator.value() / denominator.value());
  }
  return make(ExprKind::Quotient, {std::move(numerator), std::move(denominator)});
}

Expr Expr::power(Expr base, int exponent) {
  if (base.is_rational()) {
    const Rational& b = base.value();
    if (b == 0 && exponent < 0) throw Error("negative power of the literal zero");
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), b.get_num_mpz_t(), static_cast<unsigned long>(std::abs(exponent)));
    mpz_pow_ui(den.get_mpz_t(), b.get_den_mpz_t(), static_cast<unsigned long>(std::abs(exponent)));
    return exponent >= 0 ? rational(Rational(num, den)) : rational(Rational(den, num));
  }
  return make(ExprKind::Power, {std::move(base)}, exponent);
}

Expr Expr::sin(Expr arg) { return make(ExprKind::Sin, {std::move(arg)}); }
Expr Expr::cos(Expr arg) { return make(ExprKind::Cos, {std::move(arg)}); }
Expr Expr::exp(Expr arg) { return make(ExprKind::Exp, {std::move(arg)}); }
Expr Expr::ln(Expr arg) { return make(ExprKind::Ln, {std::move(arg)}); }

Expr Expr::negate(Expr arg) {
  if (arg.is_rational()) return rational(-arg.value());
  return make(ExprKind::Negate, {std::move(arg)});
}

ExprKind Expr::kind() const { return node_->kind; }
const Rational& Expr::value() const { return node_->q; }
const std::string& Expr::name() const { return node_->name; }
int Expr::exponent() const { return node_->exponent; }
std::span<const Expr> Expr::args() const { return node_->args; }
const Expr& Expr::arg(std::size_t i) const { return node_->args.at(i); }
bool Expr::is_zero_literal() const { return is_rational() && value() == 0; }
bool Expr::is_one_literal() const { return is_rational() && value() == 1; }
std::size_t Expr::hash() const { return node_->hash; }

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash()) return false;
  return compare(a, b) == 0;
}

int compare(const Expr& a, const Expr& b) {
  if (a.id() == b.id()) return 0;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  switch (a.kind()) {
    case ExprKind::Rational: {
      int c = cmp(a.value(), b.value());
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case ExprKind::Named:
    case ExprKind::Coord: {
      int c = a.name().compare(b.name());
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    default:
      break;
  }
  if (a.exponent() != b.exponent()) return a.exponent() < b.exponent() ? -1 : 1;
  auto aa = a.args();
  auto bb = b.args();
  if (aa.size() != bb.size()) return aa.size() < bb.size() ? -1 : 1;
  for (std::size_t i = 0; i < aa.size(); ++i) {
    if (int c = compare(aa[i], bb[i]); c != 0) return c;
  }
  return 0;
}

// ---------------------------------------------------------------- printing

namespace {

std::string print(const Expr& e);

bool prints_as_atom(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Named:
    case ExprKind::Coord:
    case ExprKind::Sin:
    case ExprKind::Cos:
    case ExprKind::Exp:
    case ExprKind::Ln:
      return true;
    case ExprKind::Rational:
      return is_integer(e.value()) && e.value() >= 0;
    default:
      return false;
  }
}

std::string paren(const std::string& s) { return "(" + s + ")"; }

// Operand of '^' or right operand of '/'.
std::string print_atom(const Expr& e) {
  if (prints_as_atom(e) || e.is_rational()) return print(e);
  return paren(print(e));
}

// Operand of '*' inside a product chain.
std::string print_factor(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Sum:
    case ExprKind::Product:
    case ExprKind::Quotient:
    case ExprKind::Negate:
      return paren(print(e));
    default:
      return print(e);
  }
}

// Operand following a unary or binary minus.
std::string print_signed(const Expr& e) {
  return e.kind() == ExprKind::Sum ? paren(print(e)) : print(e);
}

std::string print(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Rational: {
      const Rational& q = e.value();
      if (is_integer(q) && q >= 0) return q.get_str();
      return paren(q.get_str());
    }
    case ExprKind::Named:
    case ExprKind::Coord:
      return e.name();
    case ExprKind::Sum: {
      std::string out;
      bool first = true;
      for (const auto& t : e.args()) {
        if (t.kind() == ExprKind::Negate) {
          out += first ? "-" : " - ";
          out += print_signed(t.arg());
        } else {
          if (!first) out += " + ";
          out += t.kind() == ExprKind::Sum ? paren(print(t)) : print(t);
        }
        first = false;
      }
      return out;
    }
    case ExprKind::Product: {
      std::string out;
      for (std::size_t i = 0; i < e.args().size(); ++i) {
        if (i) out += "*";
        out += print_factor(e.args()[i]);
      }
      return out;
    }
    case ExprKind::Quotient: {
      const Expr& n = e.arg(0);
      std::string lhs;
      if (n.kind() == ExprKind::Product || n.kind() == ExprKind::Quotient) {
        lhs = print(n);
      } else {
        lhs = print_factor(n);
      }
      return lhs + "/" + print_atom(e.arg(1));
    }
    case ExprKind::Power: {
      std::string base = print_atom(e.arg());
      return base + "^" + std::to_string(e.exponent());
    }
    case ExprKind::Sin:
      return "sin(" + print(e.arg()) + ")";
    case ExprKind::Cos:
      return "cos(" + print(e.arg()) + ")";
    case ExprKind::Exp:
      return "exp(" + print(e.arg()) + ")";
    case ExprKind::Ln:
      return "ln(" + print(e.arg()) + ")";
    case ExprKind::Negate:
      return "-" + print_signed(e.arg());
  }
  return {};
}

}  // namespace

std::string to_string(const Expr& e) { return print(e); }

// ---------------------------------------------------------------- builders

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_rational() && b.is_rational()) return Expr::rational(a.value() + b.value());
  if (a.is_zero_literal()) return b;
  if (b.is_zero_literal()) return a;
  return Expr::sum({a, b});
}

Expr operator-(const Expr& a) { return Expr::negate(a); }

Expr operator-(const Expr& a, const Expr& b) {
  if (b.is_zero_literal()) return a;
  return a + Expr::negate(b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_rational() && b.is_rational()) return Expr::rational(a.value() * b.value());
  if (a.is_zero_literal() || b.is_zero_literal()) return Expr::integer(0);
  if (a.is_one_literal()) return b;
  if (b.is_one_literal()) return a;
  return Expr::product({a, b});
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_one_literal()) return a;
  if (a.is_zero_literal() && !b.is_zero_literal()) return a;
  return Expr::quotient(a, b);
}

void collect_names(const Expr& e, bool coords, std::vector<std::string>& out) {
  if ((coords && e.kind() == ExprKind::Coord) || (!coords && e.kind() == ExprKind::Named)) {
    if (std::find(out.begin(), out.end(), e.name()) == out.end()) out.push_back(e.name());
    return;
  }
  for (const auto& a : e.args()) collect_names(a, coords, out);
}

}  // namespace engelkit
