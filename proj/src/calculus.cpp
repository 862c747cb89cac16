#include "engelkit/calculus.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "engelkit/error.hpp"
#include "engelkit/normalize.hpp"

namespace engelkit {
namespace {

constexpr double kSingular = 1e-14;

Expr raw_derivative(const Expr& e, const std::string& v) {
  switch (e.kind()) {
    case ExprKind::Rational:
    case ExprKind::Named:
      return Expr::integer(0);
    case ExprKind::Coord:
      return Expr::integer(e.name() == v ? 1 : 0);
    case ExprKind::Sum: {
      std::vector<Expr> terms;
      for (const auto& t : e.args()) terms.push_back(raw_derivative(t, v));
      return Expr::sum(std::move(terms));
    }
    case ExprKind::Negate:
      return -raw_derivative(e.arg(), v);
    case ExprKind::Product: {
      std::vector<Expr> terms;
      auto args = e.args();
      for (std::size_t i = 0; i < args.size(); ++i) {
        Expr di = raw_derivative(args[i], v);
        if (di.is_zero_literal()) continue;
        std::vector<Expr> factors(args.begin(), args.end());
        factors[i] = di;
        terms.push_back(Expr::product(std::move(factors)));
      }
      return Expr::sum(std::move(terms));
    }
    case ExprKind::Quotient: {
      const Expr& a = e.arg(0);
      const Expr& b = e.arg(1);
      Expr da = raw_derivative(a, v);
      Expr db = raw_derivative(b, v);
      return (da * b - a * db) / Expr::power(b, 2);
    }
    case ExprKind::Power: {
      int n = e.exponent();
      return Expr::integer(n) * Expr::power(e.arg(), n - 1) * raw_derivative(e.arg(), v);
    }
    case ExprKind::Sin:
      return Expr::cos(e.arg()) * raw_derivative(e.arg(), v);
    case ExprKind::Cos:
      return -(Expr::sin(e.arg()) * raw_derivative(e.arg(), v));
    case ExprKind::Exp:
      return e * raw_derivative(e.arg(), v);
    case ExprKind::Ln:
      return raw_derivative(e.arg(), v) / e.arg();
  }
  return Expr::integer(0);
}

[[noreturn]] void singular(const std::string& what, const Env& env, double value) {
  Witness w;
  for (const auto& [k, x] : env) w.point.emplace_back(k, x);
  w.value = value;
  throw SingularityError(what, std::move(w));
}

double eval(const Expr& e, const Env& env) {
  switch (e.kind()) {
    case ExprKind::Rational:
      return to_double(e.value());
    case ExprKind::Named: {
      if (e.name() == "pi") return std::numbers::pi;
      auto it = env.find(e.name());
      if (it == env.end()) throw Error("unbound parameter '" + e.name() + "'");
      return it->second;
    }
    case ExprKind::Coord: {
      auto it = env.find(e.name());
      if (it == env.end()) throw Error("unbound coordinate '" + e.name() + "'");
      return it->second;
    }
    case ExprKind::Sum: {
      double s = 0.0;
      for (const auto& t : e.args()) s += eval(t, env);
      return s;
    }
    case ExprKind::Product: {
      double p = 1.0;
      for (const auto& f : e.args()) p *= eval(f, env);
      return p;
    }
    case ExprKind::Quotient: {
      double den = eval(e.arg(1), env);
      if (std::abs(den) < kSingular) singular("division by a vanishing value", env, den);
      return eval(e.arg(0), env) / den;
    }
    case ExprKind::Power: {
      double b = eval(e.arg(), env);
      if (e.exponent() < 0 && std::abs(b) < kSingular)
        singular("negative power of a vanishing value", env, b);
      return std::pow(b, e.exponent());
    }
    case ExprKind::Sin:
      return std::sin(eval(e.arg(), env));
    case ExprKind::Cos:
      return std::cos(eval(e.arg(), env));
    case ExprKind::Exp:
      return std::exp(eval(e.arg(), env));
    case ExprKind::Ln: {
      double x = eval(e.arg(), env);
      if (x <= 0.0) singular("logarithm of a non-positive value", env, x);
      return std::log(x);
    }
    case ExprKind::Negate:
      return -eval(e.arg(), env);
  }
  return 0.0;
}

}  // namespace

Expr differentiate(const Expr& e, const std::string& coordinate) {
  return normalize(raw_derivative(e, coordinate));
}

double evaluate(const Expr& e, const Env& env) {
  double v = eval(e, env);
  if (!std::isfinite(v)) singular("non-finite value", env, v);
  return v;
}

Expr map_leaves(const Expr& e, const std::function<Expr(const Expr&)>& leaf) {
  switch (e.kind()) {
    case ExprKind::Rational:
    case ExprKind::Named:
    case ExprKind::Coord:
      return leaf(e);
    case ExprKind::Sum:
    case ExprKind::Product: {
      std::vector<Expr> args;
      for (const auto& a : e.args()) args.push_back(map_leaves(a, leaf));
      return e.kind() == ExprKind::Sum ? Expr::sum(std::move(args))
                                       : Expr::product(std::move(args));
    }
    case ExprKind::Quotient:
      return Expr::quotient(map_leaves(e.arg(0), leaf), map_leaves(e.arg(1), leaf));
    case ExprKind::Power:
      return Expr::power(map_leaves(e.arg(), leaf), e.exponent());
    case ExprKind::Sin:
      return Expr::sin(map_leaves(e.arg(), leaf));
    case ExprKind::Cos:
      return Expr::cos(map_leaves(e.arg(), leaf));
    case ExprKind::Exp:
      return Expr::exp(map_leaves(e.arg(), leaf));
    case ExprKind::Ln:
      return Expr::ln(map_leaves(e.arg(), leaf));
    case ExprKind::Negate:
      return Expr::negate(map_leaves(e.arg(), leaf));
  }
  return e;
}

Expr substitute(const Expr& e, const std::string& name, const Expr& replacement) {
  return normalize(map_leaves(e, [&](const Expr& leaf) {
    if ((leaf.kind() == ExprKind::Coord || leaf.kind() == ExprKind::Named) && leaf.name() == name)
      return replacement;
    return leaf;
  }));
}

}  // namespace engelkit
