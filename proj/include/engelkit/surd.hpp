#pragma once

#include <map>
#include <string>
#include <vector>

#include "engelkit/rational.hpp"

namespace engelkit {

// Element of Q(sqrt p1, ..., sqrt pm): rational coefficients on square roots of
// squarefree positive integers, radicand 1 being the rational part.
class Surd {
 public:
  Surd() = default;
  Surd(Rational q);  // NOLINT(google-explicit-constructor)
  static Surd root(long radicand, Rational coefficient = 1);

  const std::map<long, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_rational() const;
  Rational rational_part() const;
  double to_double() const;

  friend Surd operator+(const Surd& a, const Surd& b);
  friend Surd operator-(const Surd& a, const Surd& b);
  friend Surd operator-(const Surd& a);
  friend Surd operator*(const Surd& a, const Surd& b);
  friend Surd operator/(const Surd& a, const Surd& b);
  friend bool operator==(const Surd& a, const Surd& b) { return a.terms_ == b.terms_; }

  // sqrt p -> -sqrt p for every radicand divisible by the prime p.
  Surd conjugate(long prime) const;
  Surd inverse() const;

 private:
  void add(long radicand, const Rational& q);
  std::map<long, Rational> terms_;
};

bool is_squarefree(long n);
std::string to_string(const Surd& s);

// Rank over Q of the coefficient vectors of a vector of surds: the dimension of
// the smallest rational subspace containing it.
int rational_span_rank(const std::vector<Surd>& v);

// Solves m x = b exactly. Throws Error on a singular matrix.
std::vector<Surd> solve_surd(std::vector<std::vector<Surd>> m, std::vector<Surd> b);

}  // namespace engelkit
