#include "engelkit/linalg.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>

#include "engelkit/error.hpp"
#include "engelkit/normalize.hpp"

namespace engelkit {
namespace {

using RowSet = std::uint32_t;

class Minors {
 public:
  explicit Minors(const Matrix& m) : m_(m) {}

  // Determinant of the submatrix with the given rows and columns (equal size).
  Expr det(RowSet rows, RowSet cols) {
    if (rows == 0) return Expr::integer(1);
    auto key = std::make_pair(rows, cols);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    int r = std::countr_zero(rows);
    RowSet rest = rows & (rows - 1);
    std::vector<Expr> terms;
    int position = 0;
    for (RowSet c = cols; c; c &= c - 1, ++position) {
      int j = std::countr_zero(c);
      const Expr& entry = m_[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)];
      if (entry.is_zero_literal()) continue;
      Expr minor = det(rest, cols & ~(RowSet{1} << j));
      if (minor.is_zero_literal()) continue;
      Expr term = entry * minor;
      terms.push_back(position % 2 ? -term : term);
    }
    Expr out = reduce_trig(Expr::sum(std::move(terms)));
    memo_.emplace(key, out);
    return out;
  }

 private:
  const Matrix& m_;
  std::map<std::pair<RowSet, RowSet>, Expr> memo_;
};

RowSet all_bits(std::size_t n) { return n >= 32 ? ~RowSet{0} : (RowSet{1} << n) - 1; }

double numeric_det(std::vector<std::vector<double>> a) {
  std::size_t n = a.size();
  double det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    if (a[p][c] == 0.0) return 0.0;
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return det;
}

Matrix simplified(const Matrix& m) {
  Matrix out = m;
  for (auto& row : out)
    for (auto& e : row) e = reduce_trig(e);
  return out;
}

void check_square(const Matrix& m) {
  for (const auto& row : m)
    if (row.size() != m.size()) throw Error("matrix is not square");
  if (m.size() > 31) throw Error("matrix too large");
}

// Adjugate-based solve on a square nonsingular system.
std::vector<Expr> cramer(const Matrix& a, const std::vector<Expr>& b, const Expr& det,
                         Minors& minors) {
  std::size_t n = a.size();
  std::vector<Expr> x;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Expr> terms;
    for (std::size_t i = 0; i < n; ++i) {
      if (b[i].is_zero_literal()) continue;
      Expr minor = minors.det(all_bits(n) & ~(RowSet{1} << i), all_bits(n) & ~(RowSet{1} << j));
      Expr term = b[i] * minor;
      terms.push_back((i + j) % 2 ? -term : term);
    }
    x.push_back(reduce_trig(Expr::sum(std::move(terms)) / det));
  }
  return x;
}

void verify_rows(const Matrix& a, const std::vector<Expr>& b, const std::vector<Expr>& x,
                 const Sampler& s) {
  for (std::size_t r = 0; r < a.size(); ++r) {
    std::vector<Expr> terms{-b[r]};
    for (std::size_t j = 0; j < x.size(); ++j) terms.push_back(a[r][j] * x[j]);
    auto v = s.is_zero(reduce_trig(Expr::sum(std::move(terms))));
    if (!v.holds()) throw InconsistentSystemError("overdetermined system is inconsistent", *v.witness);
  }
}

// Largest sampled magnitude in each row, so that determinant tests are
// relative to the row scales rather than absolute.
std::vector<double> row_scales(const Matrix& a, const Sampler& s) {
  std::vector<Expr> flat;
  for (const auto& row : a) flat.insert(flat.end(), row.begin(), row.end());
  auto samples = s.values(flat);
  std::size_t n = a.empty() ? 0 : a.front().size();
  std::vector<double> scale(a.size(), 0.0);
  for (const auto& point : samples)
    for (std::size_t r = 0; r < a.size(); ++r)
      for (std::size_t j = 0; j < n; ++j) scale[r] = std::max(scale[r], std::abs(point[r * n + j]));
  return scale;
}

NonvanishingVerdict relative_nonvanishing(const Expr& det, const std::vector<double>& scales,
                                          const Sampler& s) {
  auto nv = s.nonvanishing(det);
  if (det.is_zero_literal()) return nv;
  double scale = 1.0;
  for (double v : scales) scale *= v;
  nv.holds = nv.min_abs > s.policy().abs_tol * std::max(scale, 1e-300);
  return nv;
}

}  // namespace

Expr determinant(const Matrix& m) {
  check_square(m);
  Matrix s = simplified(m);
  Minors minors(s);
  return minors.det(all_bits(m.size()), all_bits(m.size()));
}

Matrix inverse(const Matrix& m, const Sampler& s) {
  check_square(m);
  Matrix a = simplified(m);
  Minors minors(a);
  std::size_t n = a.size();
  Expr det = minors.det(all_bits(n), all_bits(n));
  if (det.is_zero_literal()) {
    throw DegenerateFrameError("matrix is singular (determinant is identically zero)",
                               s.witness_at(s.points().front(), 0.0));
  }
  auto nv = relative_nonvanishing(det, row_scales(a, s), s);
  if (!nv.holds) throw DegenerateFrameError("determinant vanishes at a sample", nv.witness);
  Matrix inv(n, std::vector<Expr>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Expr minor = minors.det(all_bits(n) & ~(RowSet{1} << i), all_bits(n) & ~(RowSet{1} << j));
      Expr cof = (i + j) % 2 ? -minor : minor;
      inv[j][i] = reduce_trig(cof / det);
    }
  return inv;
}

std::vector<Expr> solve_linear(const Matrix& a_in, const std::vector<Expr>& b_in,
                               const Sampler& s) {
  if (a_in.size() != b_in.size()) throw Error("row count and right-hand side differ");
  if (a_in.empty()) throw DegenerateFrameError("empty linear system", s.witness_at(s.points().front(), 0.0));
  std::size_t n = a_in.front().size();
  Matrix a;
  std::vector<Expr> b;
  for (std::size_t r = 0; r < a_in.size(); ++r) {
    if (a_in[r].size() != n) throw Error("ragged linear system");
    std::vector<Expr> row;
    bool all_zero = true;
    for (const auto& e : a_in[r]) {
      row.push_back(reduce_trig(e));
      all_zero = all_zero && row.back().is_zero_literal();
    }
    Expr rhs = reduce_trig(b_in[r]);
    if (all_zero) {
      auto v = s.is_zero(rhs);
      if (!v.holds())
        throw InconsistentSystemError("equation 0 = " + to_string(rhs) + " is violated", *v.witness);
      continue;
    }
    a.push_back(std::move(row));
    b.push_back(std::move(rhs));
  }
  std::size_t m = a.size();
  if (m < n) throw DegenerateFrameError("underdetermined system", s.witness_at(s.points().front(), 0.0));

  // Numeric screening of square row subsets.
  std::vector<Expr> flat;
  for (const auto& row : a) flat.insert(flat.end(), row.begin(), row.end());
  auto samples = s.values(flat);
  auto scales = row_scales(a, s);
  struct Candidate {
    std::vector<std::size_t> rows;
    bool constant;
    double min_abs;
  };
  std::vector<Candidate> candidates;
  std::vector<std::size_t> subset(n);
  std::vector<bool> pick(m, false);
  std::fill(pick.begin(), pick.begin() + static_cast<long>(n), true);
  do {
    std::size_t k = 0;
    for (std::size_t r = 0; r < m; ++r)
      if (pick[r]) subset[k++] = r;
    double lo = INFINITY, hi = 0.0, scale = 1.0;
    for (std::size_t i = 0; i < n; ++i) scale *= scales[subset[i]];
    for (const auto& point : samples) {
      std::vector<std::vector<double>> sub(n, std::vector<double>(n));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) sub[i][j] = point[subset[i] * n + j];
      double d = std::abs(numeric_det(sub));
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    if (lo > s.policy().abs_tol * scale)
      candidates.push_back({subset, hi - lo <= 1e-9 * hi, lo / scale});
  } while (std::prev_permutation(pick.begin(), pick.end()));
  std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate& x, const Candidate& y) {
    if (x.constant != y.constant) return x.constant;
    return x.min_abs > y.min_abs;
  });

  // Try the best few square subsets symbolically; a sampled determinant can
  // still vanish between samples.
  constexpr std::size_t kTries = 4;
  for (std::size_t c = 0; c < std::min(kTries, candidates.size()); ++c) {
    Matrix sq;
    std::vector<Expr> rhs;
    std::vector<double> sub_scales;
    for (auto r : candidates[c].rows) {
      sq.push_back(a[r]);
      rhs.push_back(b[r]);
      sub_scales.push_back(scales[r]);
    }
    Minors minors(sq);
    Expr det = minors.det(all_bits(n), all_bits(n));
    if (det.is_zero_literal() || !relative_nonvanishing(det, sub_scales, s).holds) continue;
    std::vector<Expr> x = cramer(sq, rhs, det, minors);
    verify_rows(a, b, x, s);
    return x;
  }

  // Normal equations: A^T A x = A^T b.
  Matrix sq;
  std::vector<Expr> rhs;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Expr> row;
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<Expr> terms;
      for (std::size_t r = 0; r < m; ++r) terms.push_back(a[r][i] * a[r][j]);
      row.push_back(reduce_trig(Expr::sum(std::move(terms))));
    }
    std::vector<Expr> terms;
    for (std::size_t r = 0; r < m; ++r) terms.push_back(a[r][i] * b[r]);
    sq.push_back(std::move(row));
    rhs.push_back(reduce_trig(Expr::sum(std::move(terms))));
  }
  Minors minors(sq);
  Expr det = minors.det(all_bits(n), all_bits(n));
  if (det.is_zero_literal())
    throw DegenerateFrameError("system has no unique solution (determinant is identically zero)",
                               s.witness_at(s.points().front(), 0.0));
  auto nv = relative_nonvanishing(det, row_scales(sq, s), s);
  if (!nv.holds) throw DegenerateFrameError("system is singular at a sample", nv.witness);
  std::vector<Expr> x = cramer(sq, rhs, det, minors);
  verify_rows(a, b, x, s);
  return x;
}

std::vector<DiffForm> dual_coframe(const std::vector<VectorField>& fields, const Sampler& s) {
  if (fields.empty()) throw Error("dual_coframe needs fields");
  const Space& space = fields.front().space();
  std::size_t n = static_cast<std::size_t>(space->dim());
  if (fields.size() != n) throw Error("dual_coframe needs exactly dim fields");
  // columns are the fields
  Matrix m(n, std::vector<Expr>(n));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) m[i][j] = fields[j][static_cast<int>(i)];
  Matrix inv = inverse(m, s);
  std::vector<DiffForm> out;
  for (std::size_t a = 0; a < n; ++a) {
    std::vector<std::pair<DiffForm::Mask, Expr>> terms;
    for (std::size_t k = 0; k < n; ++k) terms.emplace_back(DiffForm::Mask{1} << k, inv[a][k]);
    out.push_back(DiffForm::from_terms(space, 1, terms));
  }
  return out;
}

std::vector<Expr> components_in(const std::vector<VectorField>& fields, const VectorField& v,
                                const Sampler& s) {
  std::size_t n = fields.size();
  std::size_t dim = static_cast<std::size_t>(v.space()->dim());
  Matrix a(dim, std::vector<Expr>(n));
  std::vector<Expr> b(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = fields[j][static_cast<int>(i)];
    b[i] = v[static_cast<int>(i)];
  }
  return solve_linear(a, b, s);
}

VectorField solve_kernel(const std::vector<KernelCondition>& conditions, const Sampler& s) {
  if (conditions.empty()) throw Error("solve_kernel needs conditions");
  const Space& space = conditions.front().form.space();
  int n = space->dim();
  std::vector<VectorField> basis;
  for (int k = 0; k < n; ++k) basis.push_back(VectorField::basis(space, k));
  Matrix a;
  std::vector<Expr> b;
  for (const auto& c : conditions) {
    if (c.form.degree() == 0) throw DegreeError("kernel condition on a 0-form");
    if (c.form.degree() > 1 && !normalize(c.target).is_zero_literal())
      throw Error("kernel conditions on forms of degree > 1 need target 0");
    std::vector<DiffForm> parts;
    std::map<DiffForm::Mask, bool> keys;
    for (int k = 0; k < n; ++k) {
      parts.push_back(interior_product(basis[static_cast<std::size_t>(k)], c.form));
      for (const auto& [m, e] : parts.back().terms()) keys[m] = true;
    }
    if (c.form.degree() == 1) keys[0] = true;
    for (const auto& [m, unused] : keys) {
      std::vector<Expr> row;
      for (int k = 0; k < n; ++k) row.push_back(parts[static_cast<std::size_t>(k)].coefficient(m));
      a.push_back(std::move(row));
      b.push_back(c.form.degree() == 1 ? c.target : Expr::integer(0));
    }
  }
  return VectorField(space, solve_linear(a, b, s));
}

}  // namespace engelkit
