// Independent helpers used only by tests: random expression trees, finite
// differences, and plain numeric linear algebra.
#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "engelkit/calculus.hpp"
#include "engelkit/expr.hpp"

namespace oracle {

using engelkit::Expr;

// Random trees that stay finite on [-1, 1]^3: denominators, logarithm and
// exponential arguments are shaped to avoid singularities and overflow.
class TreeGen {
 public:
  explicit TreeGen(unsigned seed) : rng_(seed) {}

  Expr tree(int depth) {
    if (depth <= 0 || pick(4) == 0) return leaf();
    switch (pick(9)) {
      case 0: return Expr::sum({tree(depth - 1), tree(depth - 1), tree(depth - 1)});
      case 1: return Expr::product({tree(depth - 1), tree(depth - 1)});
      case 2: return Expr::quotient(tree(depth - 1), positive(depth - 1));
      case 3: return Expr::power(tree(depth - 1), pick(3) + 1);
      case 4: return Expr::sin(tree(depth - 1));
      case 5: return Expr::cos(tree(depth - 1));
      case 6: return Expr::exp(Expr::sin(tree(depth - 1)));
      case 7: return Expr::ln(positive(depth - 1));
      default: return Expr::negate(tree(depth - 1));
    }
  }

  std::vector<double> point() {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    return {u(rng_), u(rng_), u(rng_)};
  }

  static engelkit::Env env(const std::vector<double>& p) {
    return {{"x", p[0]}, {"y", p[1]}, {"t", p[2]}, {"k", 0.75}};
  }

 private:
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  // 1 + u^2 is bounded away from zero.
  Expr positive(int depth) {
    return Expr::sum({Expr::integer(1), Expr::power(tree(depth), 2)});
  }

  Expr leaf() {
    static const char* coords[] = {"x", "y", "t"};
    switch (pick(5)) {
      case 0: return Expr::rational(engelkit::Rational(pick(7) - 3, pick(3) + 1));
      case 1: return pick(2) ? Expr::pi() : Expr::named("k");
      default: return Expr::coord(coords[pick(3)]);
    }
  }

  std::mt19937 rng_;
};

inline double central_difference(const Expr& e, engelkit::Env env, const std::string& v,
                                 double h = 1e-6) {
  double x = env.at(v);
  env[v] = x + h;
  double up = engelkit::evaluate(e, env);
  env[v] = x - h;
  double down = engelkit::evaluate(e, env);
  return (up - down) / (2 * h);
}

// Gaussian elimination with partial pivoting on a small dense system.
inline std::vector<double> solve_dense(std::vector<std::vector<double>> a, std::vector<double> b) {
  std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    std::swap(a[c], a[p]);
    std::swap(b[c], b[p]);
    for (std::size_t r = c + 1; r < n; ++r) {
      double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
    x[i] = s / a[i][i];
  }
  return x;
}

// Chart vector fields on R^4 given as plain functions, and their bracket by
// central differences.
using Vec4 = std::array<double, 4>;
using NumField = std::function<Vec4(const Vec4&)>;

inline Vec4 numeric_bracket(const NumField& x, const NumField& y, const Vec4& p, double h = 1e-6) {
  Vec4 out{};
  Vec4 xp = x(p), yp = y(p);
  for (int i = 0; i < 4; ++i) {
    Vec4 up = p, down = p;
    up[i] += h;
    down[i] -= h;
    Vec4 dy_up = y(up), dy_down = y(down), dx_up = x(up), dx_down = x(down);
    for (int k = 0; k < 4; ++k)
      out[k] += xp[i] * (dy_up[k] - dy_down[k]) / (2 * h) - yp[i] * (dx_up[k] - dx_down[k]) / (2 * h);
  }
  return out;
}

inline double dot(const Vec4& a, const Vec4& b) {
  double s = 0.0;
  for (int i = 0; i < 4; ++i) s += a[i] * b[i];
  return s;
}

// Rank by Gaussian elimination with partial pivoting and an absolute cutoff.
inline int numeric_rank(std::vector<std::vector<double>> a, double tol = 1e-9) {
  if (a.empty()) return 0;
  std::size_t rows = a.size(), cols = a.front().size(), rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t p = rank;
    for (std::size_t r = rank + 1; r < rows; ++r)
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    if (std::abs(a[p][c]) <= tol) continue;
    std::swap(a[rank], a[p]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      double f = a[r][c] / a[rank][c];
      for (std::size_t k = c; k < cols; ++k) a[r][k] -= f * a[rank][k];
    }
    ++rank;
  }
  return static_cast<int>(rank);
}

// Lie algebra on e_0..e_3 from a list of brackets [e_i, e_j] = v, as plain
// doubles; adjoint-based commutant dimension.
struct NumLie {
  double c[4][4][4] = {};
  void set(int i, int j, Vec4 v) {
    for (int k = 0; k < 4; ++k) {
      c[i][j][k] = v[k];
      c[j][i][k] = -v[k];
    }
  }
  Vec4 bracket(const Vec4& x, const Vec4& y) const {
    Vec4 out{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) out[k] += x[i] * y[j] * c[i][j][k];
    return out;
  }
  int commutant_dim(const std::vector<Vec4>& S) const {
    std::vector<std::vector<double>> rows;
    for (const auto& s : S)
      for (int k = 0; k < 4; ++k) {
        std::vector<double> row(4);
        for (int i = 0; i < 4; ++i) {
          Vec4 e{};
          e[i] = 1;
          row[i] = bracket(e, s)[k];
        }
        rows.push_back(row);
      }
    return 4 - numeric_rank(rows);
  }
};

}  // namespace oracle
