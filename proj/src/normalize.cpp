#include "engelkit/normalize.hpp"

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "engelkit/error.hpp"

namespace engelkit {
namespace {

using Monomial = std::vector<std::pair<Expr, int>>;

struct MonoLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (int c = compare(a[i].first, b[i].first); c != 0) return c < 0;
      if (a[i].second != b[i].second) return a[i].second < b[i].second;
    }
    return a.size() < b.size();
  }
};

using Poly = std::map<Monomial, Rational, MonoLess>;

Poly constant(const Rational& q) {
  Poly p;
  if (q != 0) p.emplace(Monomial{}, q);
  return p;
}

Poly atom_poly(const Expr& atom, int exponent = 1) {
  Poly p;
  p.emplace(Monomial{{atom, exponent}}, Rational(1));
  return p;
}

void add_term(Poly& p, const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = p.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) p.erase(it);
  }
}

void add_into(Poly& acc, const Poly& p, const Rational& scale = Rational(1)) {
  for (const auto& [m, c] : p) add_term(acc, m, c * scale);
}

Monomial mono_mul(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && compare(a[i].first, b[j].first) < 0)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || compare(b[j].first, a[i].first) < 0) {
      out.push_back(b[j++]);
    } else {
      int e = a[i].second + b[j].second;
      if (e != 0) out.emplace_back(a[i].first, e);
      ++i;
      ++j;
    }
  }
  return out;
}

Monomial mono_pow(const Monomial& m, int n) {
  Monomial out;
  if (n == 0) return out;
  for (const auto& [a, e] : m) out.emplace_back(a, e * n);
  return out;
}

Rational rat_pow(const Rational& q, int n) {
  Rational r(1);
  Rational b = n >= 0 ? q : Rational(1) / q;
  for (int i = 0; i < std::abs(n); ++i) r *= b;
  return r;
}

Poly mul(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) add_term(out, mono_mul(ma, mb), ca * cb);
  return out;
}

// Rewrites sin(u)^2 as 1 - cos(u)^2 until every sine has degree at most one.
Poly reduce(const Poly& p) {
  Poly out;
  std::vector<std::pair<Monomial, Rational>> work(p.begin(), p.end());
  while (!work.empty()) {
    auto [m, c] = std::move(work.back());
    work.pop_back();
    std::size_t at = m.size();
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m[i].first.kind() == ExprKind::Sin && m[i].second >= 2) at = i;
    if (at == m.size()) {
      add_term(out, m, c);
      continue;
    }
    Expr s = m[at].first;
    Monomial lowered = m;
    lowered[at].second -= 2;
    if (lowered[at].second == 0) lowered.erase(lowered.begin() + static_cast<long>(at));
    Expr cosine = Expr::cos(s.arg());
    work.emplace_back(lowered, c);
    work.emplace_back(mono_mul(lowered, Monomial{{cosine, 2}}), -c);
  }
  return out;
}

int exponent_of(const Monomial& m, const Expr& atom) {
  for (const auto& [a, e] : m)
    if (a == atom) return e;
  return 0;
}

Monomial without(const Monomial& m, const Expr& atom) {
  Monomial out;
  for (const auto& [a, e] : m)
    if (!(a == atom)) out.emplace_back(a, e);
  return out;
}

bool has_positive_sum(const Monomial& m) {
  for (const auto& [a, e] : m)
    if (a.kind() == ExprKind::Sum && e > 0) return true;
  return false;
}

// Exact division of Laurent polynomials, recursive in one atom at a time.
// Returns nullopt when `den` does not divide `num` or the quotient would hold
// a sum atom to a positive power.
std::optional<Poly> divide(const Poly& num, const Poly& den, bool trig, int& budget) {
  if (den.empty()) return std::nullopt;
  if (num.empty()) return Poly{};
  if (trig) {
    // Over Q[cos u] the ring is free on {1, sin u}; divide by the norm of den.
    for (const auto& [m, c] : den)
      for (const auto& [a, e] : m)
        if (a.kind() == ExprKind::Sin && e == 1) {
          Poly conj;
          for (const auto& [m2, c2] : den) add_term(conj, m2, exponent_of(m2, a) % 2 ? -c2 : c2);
          Poly norm = reduce(mul(den, conj));
          for (const auto& [m2, c2] : norm)
            if (exponent_of(m2, a) % 2 != 0) return std::nullopt;
          if (--budget < 0) return std::nullopt;
          return divide(reduce(mul(num, conj)), norm, trig, budget);
        }
  }
  if (den.size() == 1) {
    const auto& [m, c] = *den.begin();
    Monomial inv = mono_pow(m, -1);
    Poly out;
    for (const auto& [mn, cn] : num) {
      Monomial q = mono_mul(mn, inv);
      if (has_positive_sum(q)) return std::nullopt;
      add_term(out, q, cn / c);
    }
    return out;
  }
  // main atom: one whose exponent varies across the terms of den
  Expr main;
  bool found = false;
  for (const auto& [m, c] : den) {
    for (const auto& [a, e] : m) {
      int lo = e, hi = e;
      for (const auto& [m2, c2] : den) {
        int f = exponent_of(m2, a);
        lo = std::min(lo, f);
        hi = std::max(hi, f);
      }
      if (lo != hi) {
        main = a;
        found = true;
        break;
      }
    }
    if (found) break;
  }
  if (!found) return std::nullopt;
  auto degree_range = [&](const Poly& p) {
    int lo = exponent_of(p.begin()->first, main), hi = lo;
    for (const auto& [m, c] : p) {
      int e = exponent_of(m, main);
      lo = std::min(lo, e);
      hi = std::max(hi, e);
    }
    return std::pair{lo, hi};
  };
  auto coefficient = [&](const Poly& p, int e) {
    Poly out;
    for (const auto& [m, c] : p)
      if (exponent_of(m, main) == e) add_term(out, without(m, main), c);
    return out;
  };
  auto [dlo, dhi] = degree_range(den);
  Poly lead_den = coefficient(den, dhi);
  Poly rem = num;
  Poly quotient;
  while (!rem.empty()) {
    if (--budget < 0) return std::nullopt;
    auto [nlo, nhi] = degree_range(rem);
    if (nhi - nlo < dhi - dlo) return std::nullopt;
    auto lead = divide(coefficient(rem, nhi), lead_den, trig, budget);
    if (!lead) return std::nullopt;
    int shift = nhi - dhi;
    Poly step;
    for (const auto& [m, c] : *lead) {
      Monomial q = shift == 0 ? m : mono_mul(m, Monomial{{main, shift}});
      if (has_positive_sum(q)) return std::nullopt;
      add_term(step, q, c);
    }
    add_into(quotient, step);
    add_into(rem, trig ? reduce(mul(step, den)) : mul(step, den), Rational(-1));
  }
  return quotient;
}

std::optional<Poly> divide(const Poly& num, const Poly& den, bool trig) {
  int budget = 4000;
  return divide(num, den, trig, budget);
}

class Normalizer {
 public:
  explicit Normalizer(bool trig) : trig_(trig) {}

  Expr run(const Expr& e) { return from_poly(finish(to_poly(e))); }

 private:
  Poly finish(Poly p) {
    if (trig_) p = reduce(p);
    return tidy(std::move(p));
  }

  Poly to_poly(const Expr& e) {
    switch (e.kind()) {
      case ExprKind::Rational:
        return constant(e.value());
      case ExprKind::Named:
      case ExprKind::Coord:
        return atom_poly(e);
      case ExprKind::Sum: {
        Poly acc;
        for (const auto& t : e.args()) add_into(acc, to_poly(t));
        return tidy(std::move(acc));
      }
      case ExprKind::Negate: {
        Poly acc;
        add_into(acc, to_poly(e.arg()), Rational(-1));
        return acc;
      }
      case ExprKind::Product: {
        Poly acc = constant(Rational(1));
        for (const auto& f : e.args()) {
          acc = mul(acc, to_poly(f));
          if (acc.empty()) return acc;
        }
        return tidy(std::move(acc));
      }
      case ExprKind::Quotient: {
        Poly num = to_poly(e.arg(0));
        if (num.empty()) {
          // still reject a literal zero denominator
          (void)inverse_of(e.arg(1));
          return num;
        }
        return tidy(mul(num, inverse_of(e.arg(1))));
      }
      case ExprKind::Power:
        return power(to_poly(e.arg()), e.exponent());
      case ExprKind::Sin:
      case ExprKind::Cos:
      case ExprKind::Exp:
      case ExprKind::Ln:
        return function(e.kind(), from_poly(finish(to_poly(e.arg()))));
    }
    return {};
  }

  Poly inverse_of(const Expr& e) {
    if (e.kind() == ExprKind::Power) return power(inverse(to_poly(e.arg())), e.exponent());
    if (e.kind() == ExprKind::Product) {
      Poly acc = constant(Rational(1));
      for (const auto& f : e.args()) acc = mul(acc, inverse_of(f));
      return acc;
    }
    return inverse(to_poly(e));
  }

  Poly power(const Poly& base, int n) {
    if (n == 0) return constant(Rational(1));
    if (n < 0) return power(inverse(base), -n);
    if (base.size() == 1) {
      const auto& [m, c] = *base.begin();
      Poly out;
      out.emplace(mono_pow(m, n), rat_pow(c, n));
      return out;
    }
    Poly acc = base;
    for (int i = 1; i < n; ++i) acc = mul(acc, base);
    return tidy(std::move(acc));
  }

  Poly inverse(Poly p) {
    if (p.empty()) throw Error("division by an expression that normalizes to zero");
    if (trig_) p = reduce(p);
    if (p.empty()) throw Error("division by an expression that normalizes to zero");
    if (p.size() == 1) {
      const auto& [m, c] = *p.begin();
      Poly out;
      out.emplace(mono_pow(m, -1), Rational(1) / c);
      return out;
    }
    // Content: the largest monomial dividing every term (Laurent exponents).
    // A sum atom joins the content only when every term holds an inverse
    // power of it.
    std::map<Expr, int, ExprLess> content;
    for (const auto& [m, c] : p)
      for (const auto& [a, e] : m) content.emplace(a, 0);
    for (auto& [a, low] : content) {
      bool first = true;
      for (const auto& [m, c] : p) {
        int have = exponent_of(m, a);
        low = first ? have : std::min(low, have);
        first = false;
      }
      if (a.kind() == ExprKind::Sum)
        for (const auto& [m, c] : p)
          if (exponent_of(m, a) >= 0) low = 0;
    }
    Monomial g, g_sums;
    for (const auto& [a, e] : content)
      if (e != 0) (a.kind() == ExprKind::Sum ? g_sums : g).emplace_back(a, e);
    Monomial g_inv = mono_pow(g, -1);
    if (!g_sums.empty()) {
      Monomial lift = mono_pow(g_sums, -1);
      Poly rest;
      for (const auto& [m, c] : p) {
        Monomial plain;
        Poly factor = constant(c);
        for (const auto& [a, e] : mono_mul(m, lift)) {
          if (a.kind() == ExprKind::Sum && e > 0) {
            factor = mul(factor, power(to_poly_plain(a), e));
          } else {
            plain.emplace_back(a, e);
          }
        }
        add_into(rest, mul(factor, Poly{{plain, Rational(1)}}));
      }
      if (trig_) rest = reduce(rest);
      Poly out = inverse(std::move(rest));
      for (const auto& [a, e] : g_sums) out = mul(out, power(to_poly_plain(a), -e));
      return tidy(std::move(out));
    }
    Poly shifted;
    for (const auto& [m, c] : p) add_term(shifted, mono_mul(m, g_inv), c);
    for (const auto& [known, atom] : denominators_) {
      if (known.size() >= shifted.size()) continue;
      if (auto rest = divide(shifted, known, trig_)) {
        Poly out = mul(inverse(std::move(*rest)), atom_poly(atom, -1));
        out = mul(out, Poly{{g_inv, Rational(1)}});
        return out;
      }
    }
    Rational lead = shifted.begin()->second;
    Poly primitive;
    for (const auto& [m, c] : shifted) add_term(primitive, m, c / lead);
    Expr atom = from_poly(primitive);
    bool seen = false;
    for (const auto& [known, a] : denominators_) seen = seen || a == atom;
    if (!seen) denominators_.emplace_back(primitive, atom);
    Poly out;
    out.emplace(mono_mul(g_inv, Monomial{{atom, -1}}), Rational(1) / lead);
    return out;
  }

  Poly function(ExprKind kind, const Expr& arg) {
    if (auto q = as_rational(arg)) {
      if (*q == 0) {
        if (kind == ExprKind::Sin) return {};
        if (kind == ExprKind::Cos || kind == ExprKind::Exp) return constant(Rational(1));
      }
      if (*q == 1 && kind == ExprKind::Ln) return {};
    }
    Expr atom;
    switch (kind) {
      case ExprKind::Sin: atom = Expr::sin(arg); break;
      case ExprKind::Cos: atom = Expr::cos(arg); break;
      case ExprKind::Exp: atom = Expr::exp(arg); break;
      default: atom = Expr::ln(arg); break;
    }
    return atom_poly(atom);
  }

  // With p = sum_k N_k [Q]^-k, fold N_K / Q into N_{K-1} whenever Q divides
  // the top numerator N_K.
  Poly tidy(Poly p) {
    for (bool changed = true; changed;) {
      changed = false;
      std::vector<std::pair<Expr, int>> sums;
      for (const auto& [m, c] : p)
        for (const auto& [a, e] : m)
          if (a.kind() == ExprKind::Sum && e < 0) {
            bool seen = false;
            for (auto& [s, top] : sums)
              if (s == a) {
                seen = true;
                top = std::max(top, -e);
              }
            if (!seen) sums.emplace_back(a, -e);
          }
      for (const auto& [q_atom, top] : sums) {
        Poly numer;
        std::vector<Monomial> owners;
        for (const auto& [m, c] : p)
          if (exponent_of(m, q_atom) == -top) {
            owners.push_back(m);
            add_term(numer, without(m, q_atom), c);
          }
        if (numer.empty()) continue;
        auto folded = divide(numer, to_poly_plain(q_atom), trig_);
        if (!folded) continue;
        for (const auto& m : owners) p.erase(m);
        Poly lifted = top == 1 ? *folded : mul(*folded, atom_poly(q_atom, 1 - top));
        add_into(p, lifted);
        changed = true;
        break;
      }
    }
    return p;
  }

  // Sum atoms are already canonical; re-expanding them needs no trig pass.
  Poly to_poly_plain(const Expr& e) {
    Normalizer plain(false);
    return plain.to_poly(e);
  }

 public:
  static Expr from_poly(const Poly& p) {
    if (p.empty()) return Expr::integer(0);
    std::vector<Expr> terms;
    for (const auto& [m, c] : p) {
      if (m.empty()) {
        terms.push_back(Expr::rational(c));
        continue;
      }
      Rational mag = abs(c);
      std::vector<Expr> num, den;
      if (mag != 1) num.push_back(Expr::rational(mag));
      for (const auto& [a, e] : m) {
        if (e > 0) num.push_back(e == 1 ? a : Expr::power(a, e));
        if (e < 0) den.push_back(e == -1 ? a : Expr::power(a, -e));
      }
      Expr term = Expr::product(num);
      if (!den.empty()) term = Expr::quotient(term, Expr::product(den));
      if (c < 0) term = Expr::negate(term);
      terms.push_back(term);
    }
    return Expr::sum(std::move(terms));
  }

 private:
  bool trig_;
  // primitive sums already inverted in this run, with their atoms
  std::vector<std::pair<Poly, Expr>> denominators_;
};

}  // namespace

Expr normalize(const Expr& e) { return Normalizer(false).run(e); }
Expr reduce_trig(const Expr& e) { return Normalizer(true).run(e); }

std::optional<Rational> as_rational(const Expr& e) {
  if (e.is_rational()) return e.value();
  return std::nullopt;
}

bool mentions_coordinates(const Expr& e) {
  if (e.kind() == ExprKind::Coord) return true;
  for (const auto& a : e.args())
    if (mentions_coordinates(a)) return true;
  return false;
}

}  // namespace engelkit
