#include "engelkit/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "engelkit/error.hpp"
#include "engelkit/normalize.hpp"
#include "support.hpp"

namespace engelkit {
namespace {

using detail::field_zero;
using detail::scalar_zero;

std::vector<Expr> one_form_components(const DiffForm& theta) {
  if (theta.degree() != 1) throw DegreeError("expected a 1-form");
  std::vector<Expr> out;
  for (int k = 0; k < theta.space()->dim(); ++k) out.push_back(theta.coefficient(DiffForm::Mask{1} << k));
  return out;
}

void require_orthogonal(const Metric& g, const EngelData& data, const Sampler& s) {
  for (const auto& v : orthogonality_check(g, data, s))
    if (!v.verdict.holds()) throw PreconditionError("D and R are not orthogonal: " + v.name + " does not vanish");
}

}  // namespace

Expr Metric::operator()(const VectorField& u, const VectorField& v) const {
  std::vector<Expr> terms;
  int n = space->dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Expr& gij = g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (gij.is_zero_literal() || u[i].is_zero_literal() || v[j].is_zero_literal()) continue;
      terms.push_back(u[i] * gij * v[j]);
    }
  return reduce_trig(Expr::sum(std::move(terms)));
}

Metric basis_metric(const Space& space, const Matrix& g) {
  std::size_t n = static_cast<std::size_t>(space->dim());
  if (g.size() != n) throw Error("metric matrix has the wrong size");
  Matrix m(n, std::vector<Expr>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (g[i].size() != n) throw Error("metric matrix has the wrong size");
    for (std::size_t j = 0; j < n; ++j) m[i][j] = reduce_trig(g[i][j]);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!reduce_trig(m[i][j] - m[j][i]).is_zero_literal()) throw Error("metric matrix is not symmetric");
  return {space, m};
}

Metric frame_metric(const std::vector<VectorField>& fields, const Matrix& gram, const Sampler& s) {
  const Space& space = fields.front().space();
  auto theta = dual_coframe(fields, s);
  std::size_t n = fields.size();
  Matrix m(n, std::vector<Expr>(n));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = k; l < n; ++l) {
      std::vector<Expr> terms;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          if (gram[i][j].is_zero_literal()) continue;
          terms.push_back(theta[i].coefficient(DiffForm::Mask{1} << k) * gram[i][j] *
                          theta[j].coefficient(DiffForm::Mask{1} << l));
        }
      m[k][l] = m[l][k] = reduce_trig(Expr::sum(std::move(terms)));
    }
  return basis_metric(space, m);
}

Metric orthonormal(const std::vector<VectorField>& fields, const Sampler& s) {
  std::size_t n = fields.size();
  Matrix id(n, std::vector<Expr>(n, Expr::integer(0)));
  for (std::size_t i = 0; i < n; ++i) id[i][i] = Expr::integer(1);
  return frame_metric(fields, id, s);
}

NonvanishingVerdict positive_definite(const Metric& g, const Sampler& s) {
  std::vector<Expr> minors;
  for (std::size_t k = 1; k <= g.g.size(); ++k) {
    Matrix lead(k, std::vector<Expr>(k));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) lead[i][j] = g.g[i][j];
    minors.push_back(determinant(lead));
  }
  std::vector<Env> used;
  auto values = s.values(minors, &used);
  NonvanishingVerdict v;
  v.min_abs = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < values.size(); ++p)
    for (double m : values[p])
      if (m < v.min_abs) {
        v.min_abs = m;
        v.witness = s.witness_at(used[p], m);
      }
  v.holds = v.min_abs > s.policy().abs_tol;
  return v;
}

VectorField metric_dual(const Metric& g, const DiffForm& theta, const Sampler& s) {
  auto pd = positive_definite(g, s);
  if (!pd.holds) throw DegenerateFrameError("metric is not positive definite", pd.witness);
  return VectorField(g.space, solve_linear(g.g, one_form_components(theta), s));
}

MetricDualReport metric_duals(const Metric& g, const EngelData& data, const Sampler& s) {
  MetricDualReport r;
  r.A = metric_dual(g, data.alpha, s);
  r.B = metric_dual(g, data.beta, s);
  Expr ab = g(r.A, r.B);
  r.a_combination = field_zero(r.A - (ab * data.T + g(r.A, r.A) * data.R), s);
  r.b_combination = field_zero(r.B - (g(r.B, r.B) * data.T + ab * data.R), s);
  return r;
}

bool all_hold(const std::vector<NamedVerdict>& vs) {
  return std::all_of(vs.begin(), vs.end(), [](const NamedVerdict& v) { return v.verdict.holds(); });
}

std::vector<NamedVerdict> orthogonality_check(const Metric& g, const EngelData& data, const Sampler& s) {
  return {{"g(W,T)", scalar_zero(g(data.W, data.T), s)},
          {"g(W,R)", scalar_zero(g(data.W, data.R), s)},
          {"g(X,T)", scalar_zero(g(data.X, data.T), s)},
          {"g(X,R)", scalar_zero(g(data.X, data.R), s)}};
}

Expr second_fundamental_expr(const Metric& g, const VectorField& u, const VectorField& u2,
                             const VectorField& v) {
  return reduce_trig(apply(v, g(u, u2)) + g(bracket(u2, v), u) + g(bracket(u, v), u2));
}

std::vector<NamedVerdict> totally_geodesic_check(const Metric& g, const EngelData& data,
                                                 Distribution which, const Sampler& s) {
  require_orthogonal(g, data, s);
  using Named = std::pair<const char*, const VectorField*>;
  std::vector<Named> inside{{"W", &data.W}, {"X", &data.X}};
  std::vector<Named> across{{"T", &data.T}, {"R", &data.R}};
  if (which == Distribution::R) std::swap(inside, across);
  std::vector<NamedVerdict> out;
  for (const auto& [un, u] : inside)
    for (const auto& [u2n, u2] : inside)
      for (const auto& [vn, v] : across)
        out.push_back({std::string("h(") + un + "," + u2n + ";" + vn + ")",
                       scalar_zero(second_fundamental_expr(g, *u, *u2, *v), s)});
  return out;
}

std::vector<NamedVerdict> geodesic_bracket_shape(const EngelData& data, const Sampler& s) {
  BracketTable t = compute_bracket_table(data);
  std::vector<NamedVerdict> out;
  auto vanish = [&](FramePair p, FrameSlot slot) {
    out.push_back({coefficient_name(p, slot), scalar_zero(t(p, slot), s)});
  };
  for (FramePair p : {FramePair::WT, FramePair::WR, FramePair::XT, FramePair::XR}) vanish(p, FrameSlot::T);
  vanish(FramePair::WT, FrameSlot::R);
  vanish(FramePair::WT, FrameSlot::W);
  vanish(FramePair::WR, FrameSlot::W);
  vanish(FramePair::XT, FrameSlot::X);
  vanish(FramePair::XR, FrameSlot::X);
  out.push_back({"b_WT + a_XT", scalar_zero(t(FramePair::WT, FrameSlot::X) + t(FramePair::XT, FrameSlot::W), s)});
  out.push_back({"b_WR + a_XR", scalar_zero(t(FramePair::WR, FrameSlot::X) + t(FramePair::XR, FrameSlot::W), s)});
  return out;
}

std::vector<NamedVerdict> killing_check(const Metric& g, const VectorField& Z, const Sampler& s) {
  const Space& space = g.space;
  int n = space->dim();
  std::vector<VectorField> basis;
  std::vector<VectorField> moved;
  for (int i = 0; i < n; ++i) {
    basis.push_back(VectorField::basis(space, i));
    moved.push_back(bracket(Z, basis.back()));
  }
  std::vector<NamedVerdict> out;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
      Expr value = apply(Z, g.g[ui][uj]) - g(moved[ui], basis[uj]) - g(basis[ui], moved[uj]);
      out.push_back({"L_Z g(" + space->direction(i).name + "," + space->direction(j).name + ")",
                     scalar_zero(value, s)});
    }
  return out;
}

GeodesicDbeta2Report geodesic_dbeta2_pipeline(const Metric& g, const EngelData& data, const Sampler& s) {
  GeodesicDbeta2Report r;
  r.geodesic = totally_geodesic_check(g, data, Distribution::D, s);
  for (const auto& v : r.geodesic)
    if (!v.verdict.holds()) throw PreconditionError("D is not totally geodesic: " + v.name + " does not vanish");
  BracketTable t = compute_bracket_table(data);
  r.criterion = scalar_zero(t(FramePair::WR, FrameSlot::W) + t(FramePair::XR, FrameSlot::X), s);
  r.dbeta2 = dbeta2_criterion(data, s);
  return r;
}

}  // namespace engelkit
