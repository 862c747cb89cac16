#include "engelkit/surd.hpp"

#include <cmath>
#include <numeric>
#include <set>

#include "engelkit/error.hpp"

namespace engelkit {
namespace {

std::set<long> prime_factors(long n) {
  std::set<long> out;
  for (long p = 2; p * p <= n; ++p)
    while (n % p == 0) {
      out.insert(p);
      n /= p;
    }
  if (n > 1) out.insert(n);
  return out;
}

}  // namespace

bool is_squarefree(long n) {
  if (n < 1) return false;
  for (long p = 2; p * p <= n; ++p)
    if (n % (p * p) == 0) return false;
  return true;
}

Surd::Surd(Rational q) {
  if (q != 0) terms_[1] = q;
}

Surd Surd::root(long radicand, Rational coefficient) {
  if (!is_squarefree(radicand)) throw Error("radicand " + std::to_string(radicand) + " is not squarefree");
  Surd s;
  s.add(radicand, coefficient);
  return s;
}

void Surd::add(long radicand, const Rational& q) {
  if (q == 0) return;
  Rational& slot = terms_[radicand];
  slot += q;
  if (slot == 0) terms_.erase(radicand);
}

bool Surd::is_rational() const { return terms_.empty() || (terms_.size() == 1 && terms_.count(1) == 1); }

Rational Surd::rational_part() const {
  auto it = terms_.find(1);
  return it == terms_.end() ? Rational(0) : it->second;
}

double Surd::to_double() const {
  double v = 0.0;
  for (const auto& [r, q] : terms_) v += engelkit::to_double(q) * std::sqrt(static_cast<double>(r));
  return v;
}

Surd operator+(const Surd& a, const Surd& b) {
  Surd out = a;
  for (const auto& [r, q] : b.terms_) out.add(r, q);
  return out;
}

Surd operator-(const Surd& a) {
  Surd out;
  for (const auto& [r, q] : a.terms_) out.add(r, -q);
  return out;
}

Surd operator-(const Surd& a, const Surd& b) { return a + (-b); }

Surd operator*(const Surd& a, const Surd& b) {
  Surd out;
  for (const auto& [ra, qa] : a.terms_)
    for (const auto& [rb, qb] : b.terms_) {
      // sqrt(ra) sqrt(rb) = g sqrt(ra rb / g^2) with g = gcd(ra, rb)
      long g = std::gcd(ra, rb);
      out.add((ra / g) * (rb / g), qa * qb * g);
    }
  return out;
}

Surd Surd::conjugate(long prime) const {
  Surd out;
  for (const auto& [r, q] : terms_) out.add(r, r % prime == 0 ? Rational(-q) : q);
  return out;
}

Surd Surd::inverse() const {
  if (is_zero()) throw Error("division by zero in a surd field");
  std::set<long> primes;
  for (const auto& [r, q] : terms_) {
    auto f = prime_factors(r);
    primes.insert(f.begin(), f.end());
  }
  // Multiplying by the conjugate in each prime removes that prime; after all
  // of them the product is rational.
  Surd numerator(Rational(1));
  Surd norm = *this;
  for (long p : primes) {
    Surd c = norm.conjugate(p);
    numerator = numerator * c;
    norm = norm * c;
  }
  if (!norm.is_rational() || norm.is_zero()) throw Error("surd norm did not reduce to a nonzero rational");
  return numerator * Surd(Rational(1) / norm.rational_part());
}

Surd operator/(const Surd& a, const Surd& b) { return a * b.inverse(); }

std::string to_string(const Surd& s) {
  if (s.is_zero()) return "0";
  std::string out;
  for (const auto& [r, q] : s.terms()) {
    std::string term = r == 1 ? to_string(q) : (q == 1 ? "" : to_string(q) + "*") + "sqrt(" + std::to_string(r) + ")";
    if (out.empty()) {
      out = term;
    } else if (!term.empty() && term[0] == '-') {
      out += " - " + term.substr(1);
    } else {
      out += " + " + term;
    }
  }
  return out;
}

int rational_span_rank(const std::vector<Surd>& v) {
  std::set<long> radicands;
  for (const auto& s : v)
    for (const auto& [r, q] : s.terms()) radicands.insert(r);
  // One rational row per radicand: the coefficient vector of that generator.
  std::vector<std::vector<Rational>> rows;
  for (long r : radicands) {
    std::vector<Rational> row;
    for (const auto& s : v) {
      auto it = s.terms().find(r);
      row.push_back(it == s.terms().end() ? Rational(0) : it->second);
    }
    rows.push_back(std::move(row));
  }
  int rank = 0;
  std::size_t cols = v.size();
  for (std::size_t c = 0; c < cols && rank < static_cast<int>(rows.size()); ++c) {
    auto pivot = static_cast<std::size_t>(rank);
    std::size_t p = pivot;
    while (p < rows.size() && rows[p][c] == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[pivot]);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == pivot || rows[i][c] == 0) continue;
      Rational factor = rows[i][c] / rows[pivot][c];
      for (std::size_t j = c; j < cols; ++j) rows[i][j] -= factor * rows[pivot][j];
    }
    ++rank;
  }
  return rank;
}

std::vector<Surd> solve_surd(std::vector<std::vector<Surd>> m, std::vector<Surd> b) {
  std::size_t n = m.size();
  if (b.size() != n) throw Error("surd system has mismatched sizes");
  for (std::size_t c = 0; c < n; ++c) {
    if (m[c].size() != n) throw Error("surd system is not square");
    std::size_t p = c;
    while (p < n && m[p][c].is_zero()) ++p;
    if (p == n) throw Error("surd matrix is singular");
    std::swap(m[p], m[c]);
    std::swap(b[p], b[c]);
    Surd inv = m[c][c].inverse();
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || m[i][c].is_zero()) continue;
      Surd factor = m[i][c] * inv;
      for (std::size_t j = c; j < n; ++j) m[i][j] = m[i][j] - factor * m[c][j];
      b[i] = b[i] - factor * b[c];
    }
  }
  std::vector<Surd> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / m[i][i];
  return x;
}

}  // namespace engelkit
