#include "engelkit/engel.hpp"

#include <algorithm>
#include <functional>

#include "engelkit/error.hpp"
#include "engelkit/linalg.hpp"
#include "engelkit/normalize.hpp"
#include "support.hpp"

namespace engelkit {
namespace {

using detail::field_zero;
using detail::form_zero;
using detail::is_literal;
using detail::scalar_zero;
using detail::try_solve;
using detail::worst;

void require_dimension(const DiffForm& w, int n, const char* what) {
  if (w.space()->dim() != n)
    throw PreconditionError(std::string(what) + " needs a " + std::to_string(n) +
                            "-dimensional space, got " + std::to_string(w.space()->dim()));
}

Expr one() { return Expr::integer(1); }
Expr zero() { return Expr::integer(0); }

Expr det_of(const std::vector<VectorField>& fields) {
  Matrix m;
  for (const auto& f : fields) m.push_back(f.components());
  return determinant(m);
}

}  // namespace

EngelFormVerdicts check_engel_forms(const DiffForm& alpha, const DiffForm& beta, const Sampler& s) {
  require_dimension(alpha, 4, "Engel defining forms");
  if (alpha.degree() != 1 || beta.degree() != 1) throw DegreeError("Engel defining forms are 1-forms");
  DiffForm da = exterior_derivative(alpha);
  DiffForm db = exterior_derivative(beta);
  DiffForm ada = wedge(alpha, da);
  EngelFormVerdicts v;
  v.even_contact = nonvanishing(map_coefficients(ada, reduce_trig), s);
  v.transverse = nonvanishing(map_coefficients(wedge(wedge(alpha, beta), db), reduce_trig), s);
  v.flag = form_zero(wedge(ada, beta), s);
  return v;
}

VectorField characteristic_field(const DiffForm& alpha, const Sampler& s) {
  require_dimension(alpha, 4, "characteristic_field");
  const Space& space = alpha.space();
  DiffForm ada = map_coefficients(wedge(alpha, exterior_derivative(alpha)), reduce_trig);
  auto nv = nonvanishing(ada, s);
  if (!nv.holds) throw DegenerateFrameError("alpha ^ d alpha vanishes", nv.witness);
  for (int i = 0; i < space->dim(); ++i) {
    auto w = try_solve({{ada, zero()}, {alpha, zero()}, {DiffForm::basis(space, i), one()}}, s);
    if (w) return *w;
  }
  throw DegenerateFrameError("kernel of alpha ^ d alpha is not a line field",
                             s.witness_at(s.points().front(), 0.0));
}

ReebPair reeb_distribution(const DiffForm& alpha, const DiffForm& beta, const Sampler& s) {
  require_dimension(alpha, 4, "reeb_distribution");
  DiffForm db = exterior_derivative(beta);
  DiffForm a_db = map_coefficients(wedge(alpha, db), reduce_trig);
  DiffForm b_db = map_coefficients(wedge(beta, db), reduce_trig);
  ReebPair out;
  out.T = map_components(solve_kernel({{a_db, zero()}, {beta, one()}, {alpha, zero()}}, s), reduce_trig);
  out.R = map_components(solve_kernel({{b_db, zero()}, {beta, zero()}, {alpha, one()}}, s), reduce_trig);
  return out;
}

VectorField complete_framing(const DiffForm& alpha, const DiffForm& beta, const VectorField& W,
                             const Sampler& s) {
  const Space& space = alpha.space();
  ReebPair reeb = reeb_distribution(alpha, beta, s);
  int n = space->dim();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      auto x = try_solve({{alpha, zero()},
                          {beta, zero()},
                          {DiffForm::basis(space, i), one()},
                          {DiffForm::basis(space, j), zero()}},
                         s);
      if (!x) continue;
      Expr det = det_of({W, *x, reeb.T, reeb.R});
      if (!det.is_zero_literal() && s.nonvanishing(det).holds) return *x;
    }
  }
  throw DegenerateFrameError("no field of D independent of W found",
                             s.witness_at(s.points().front(), 0.0));
}

EngelData make_engel_data(const DiffForm& alpha, const DiffForm& beta, const VectorField& W,
                          const VectorField& X, const Sampler& s) {
  EngelData d;
  d.space = alpha.space();
  d.alpha = alpha;
  d.beta = beta;
  d.W = W;
  d.X = X;
  ReebPair reeb = reeb_distribution(alpha, beta, s);
  d.T = reeb.T;
  d.R = reeb.R;
  auto coframe = dual_coframe({d.W, d.X, d.T, d.R}, s);
  for (std::size_t i = 0; i < 4; ++i) d.coframe[i] = coframe[i];
  return d;
}

EngelData make_engel_data(const DiffForm& alpha, const DiffForm& beta, const Sampler& s) {
  VectorField W = characteristic_field(alpha, s);
  VectorField X = complete_framing(alpha, beta, W, s);
  return make_engel_data(alpha, beta, W, X, s);
}

std::string to_string(FramePair p) {
  static const char* names[] = {"WX", "WT", "WR", "XT", "XR", "TR"};
  return names[static_cast<int>(p)];
}

std::string coefficient_name(FramePair p, FrameSlot slot) {
  static const char letters[] = {'a', 'b', 'c', 'd'};
  return std::string(1, letters[static_cast<int>(slot)]) + "_" + to_string(p);
}

const VectorField& frame_field(const EngelData& data, FrameSlot slot) {
  switch (slot) {
    case FrameSlot::W: return data.W;
    case FrameSlot::X: return data.X;
    case FrameSlot::T: return data.T;
    case FrameSlot::R: return data.R;
  }
  throw Error("bad frame slot");
}

namespace {

std::pair<FrameSlot, FrameSlot> slots_of(FramePair p) {
  switch (p) {
    case FramePair::WX: return {FrameSlot::W, FrameSlot::X};
    case FramePair::WT: return {FrameSlot::W, FrameSlot::T};
    case FramePair::WR: return {FrameSlot::W, FrameSlot::R};
    case FramePair::XT: return {FrameSlot::X, FrameSlot::T};
    case FramePair::XR: return {FrameSlot::X, FrameSlot::R};
    case FramePair::TR: return {FrameSlot::T, FrameSlot::R};
  }
  throw Error("bad frame pair");
}

}  // namespace

BracketTable compute_bracket_table(const EngelData& data) {
  BracketTable table;
  for (FramePair p : kFramePairs) {
    auto [a, b] = slots_of(p);
    VectorField br = bracket(frame_field(data, a), frame_field(data, b));
    for (int k = 0; k < 4; ++k)
      table(p, static_cast<FrameSlot>(k)) = reduce_trig(pairing(data.coframe[static_cast<std::size_t>(k)], br));
  }
  return table;
}

std::vector<NamedVerdict> jacobi_identities(const EngelData& data, const BracketTable& t,
                                            const Sampler& s) {
  using P = FramePair;
  using S = FrameSlot;
  auto W = [&](const Expr& f) { return apply(data.W, f); };
  auto X = [&](const Expr& f) { return apply(data.X, f); };
  auto T = [&](const Expr& f) { return apply(data.T, f); };
  const Expr &a_wx = t(P::WX, S::W), &b_wx = t(P::WX, S::X);
  const Expr &a_wt = t(P::WT, S::W), &b_wt = t(P::WT, S::X);
  const Expr &a_wr = t(P::WR, S::W), &b_wr = t(P::WR, S::X), &d_wr = t(P::WR, S::R);
  const Expr &a_xt = t(P::XT, S::W), &b_xt = t(P::XT, S::X);
  const Expr &b_xr = t(P::XR, S::X), &d_xr = t(P::XR, S::R);
  const Expr &a_tr = t(P::TR, S::W), &b_tr = t(P::TR, S::X), &c_tr = t(P::TR, S::T),
             &d_tr = t(P::TR, S::R);

  std::vector<std::pair<std::string, Expr>> items{
      {"c_WT", t(P::WT, S::T)},
      {"c_WR", t(P::WR, S::T)},
      {"c_XT", t(P::XT, S::T)},
      {"c_XR", t(P::XR, S::T)},
      {"d_WX", t(P::WX, S::R)},
      {"d_WT", t(P::WT, S::R)},
      {"J1a", b_wx - d_wr},
      {"J1b", b_xt + a_wt},
      {"J2a", d_tr - (W(d_xr) - X(d_wr) - a_wx * d_wr - d_xr * d_wr)},
      {"J2b", c_tr - (a_wr + b_xr)},
      {"J3a", b_wr - (-W(d_tr) + T(d_wr) + a_wt * d_wr + b_wt * d_xr)},
      {"J3b", b_tr - (-W(c_tr) + d_wr * c_tr)},
      {"J4a", c_tr - (-X(d_tr) + T(d_xr) - a_wt * d_xr + a_xt * d_wr - b_xr)},
      {"J4b", a_tr - (X(c_tr) - d_xr * c_tr)},
  };
  std::vector<NamedVerdict> out;
  for (auto& [name, e] : items) out.push_back({name, scalar_zero(e, s)});
  return out;
}

AdaptedVerdicts adapted_check(const EngelData&, const BracketTable& t, const Sampler& s) {
  return {scalar_zero(t(FramePair::WX, FrameSlot::T) - one(), s),
          scalar_zero(t(FramePair::XT, FrameSlot::R) - one(), s)};
}

bool TableReport::holds() const {
  return std::all_of(identities.begin(), identities.end(),
                     [](const NamedVerdict& v) { return v.verdict.holds(); });
}

TableReport bracket_table(const EngelData& data, const Sampler& s) {
  TableReport r;
  r.table = compute_bracket_table(data);
  if (!adapted_check(data, r.table, s).holds())
    throw PreconditionError("framing is not (alpha, beta)-adapted; rescale it with adapted_framing first");
  r.identities = jacobi_identities(data, r.table, s);
  return r;
}

std::pair<VectorField, VectorField> adapted_framing(const DiffForm& alpha, const DiffForm& beta,
                                                    const VectorField& W, const VectorField& X,
                                                    const Sampler& s) {
  ReebPair reeb = reeb_distribution(alpha, beta, s);
  Expr c_wx = reduce_trig(pairing(beta, bracket(W, X)));
  auto nv = s.nonvanishing(c_wx);
  if (!nv.holds) throw DegenerateFrameError("beta([W,X]) vanishes", nv.witness);
  Expr d_xt = reduce_trig(pairing(alpha, bracket(X, reeb.T)));
  nv = s.nonvanishing(d_xt);
  if (!nv.holds) throw DegenerateFrameError("alpha([X,T]) vanishes", nv.witness);
  VectorField w2 = map_components(reduce_trig(d_xt / c_wx) * W, reduce_trig);
  VectorField x2 = map_components(reduce_trig(one() / d_xt) * X, reduce_trig);
  auto check = [&](const Expr& e, const char* what) {
    auto v = scalar_zero(e - one(), s);
    if (!v.holds()) throw DegenerateFrameError(std::string("rescaled ") + what + " is not 1", *v.witness);
  };
  check(pairing(beta, bracket(w2, x2)), "c_WX");
  check(pairing(alpha, bracket(x2, reeb.T)), "d_XT");
  return {w2, x2};
}

EngelData adapt(const EngelData& data, const Sampler& s) {
  auto [w, x] = adapted_framing(data.alpha, data.beta, data.W, data.X, s);
  EngelData out = data;
  out.W = w;
  out.X = x;
  auto coframe = dual_coframe({out.W, out.X, out.T, out.R}, s);
  for (std::size_t i = 0; i < 4; ++i) out.coframe[i] = coframe[i];
  return out;
}

ZeroVerdict frobenius_check(const EngelData& data, const Sampler& s) {
  VectorField tr = bracket(data.T, data.R);
  return worst({scalar_zero(det_of({data.T, data.R, tr, data.W}), s),
                scalar_zero(det_of({data.T, data.R, tr, data.X}), s)});
}

IntegrabilityReport integrability_check(const EngelData& data, const Sampler& s) {
  IntegrabilityReport r;
  DiffForm db = exterior_derivative(data.beta);
  r.c_tr = reduce_trig(evaluate_on(db, {data.R, data.T}));
  r.condition = form_zero(wedge(exterior_derivative(r.c_tr * data.alpha), data.beta), s);
  DiffForm k = db + r.c_tr * wedge(data.beta, data.alpha);
  r.t_in_kernel = form_zero(interior_product(data.T, k), s);
  r.r_in_kernel = form_zero(interior_product(data.R, k), s);
  r.frobenius = frobenius_check(data, s);
  return r;
}

bool TransformReport::holds() const {
  return std::all_of(closed_forms.begin(), closed_forms.end(),
                     [](const NamedVerdict& v) { return v.verdict.holds(); });
}

TransformReport transform_forms(const EngelData& data_in, const Expr& lambda, const Expr& mu,
                                const Expr& nu, const Sampler& s) {
  for (auto [f, name] : {std::pair{lambda, "lambda"}, std::pair{mu, "mu"}}) {
    auto nv = s.nonvanishing(f);
    if (!nv.holds) throw DegenerateFrameError(std::string(name) + " vanishes", nv.witness);
  }
  EngelData data = adapt(data_in, s);
  BracketTable t = compute_bracket_table(data);
  Expr c_tr = reduce_trig(evaluate_on(exterior_derivative(data.beta), {data.R, data.T}));

  TransformReport r;
  r.alpha = lambda * data.alpha;
  r.beta = mu * data.beta + nu * data.alpha;
  ReebPair reeb = reeb_distribution(r.alpha, r.beta, s);
  r.T = reeb.T;
  r.R = reeb.R;
  r.c_tr = reduce_trig(evaluate_on(exterior_derivative(r.beta), {r.R, r.T}));

  bool unit_lambda = is_literal(lambda, 1);
  bool unit_mu = is_literal(mu, 1);
  bool zero_nu = is_literal(nu, 0);
  auto add = [&](const std::string& name, ZeroVerdict v) { r.closed_forms.push_back({name, v}); };
  if (unit_mu && zero_nu) {
    add("scale_alpha.R", field_zero(r.R - (one() / lambda) * data.R, s));
    add("scale_alpha.T", field_zero(r.T - data.T, s));
    add("scale_alpha.c_TR", scalar_zero(r.c_tr - c_tr / lambda, s));
  }
  if (unit_lambda && zero_nu) {
    Expr x_log = apply(data.X, mu) / mu;
    Expr w_log = apply(data.W, mu) / mu;
    Expr r_log = apply(data.R, mu) / mu;
    VectorField t_closed = (one() / mu) * ((-x_log) * data.W + w_log * data.X + data.T);
    add("scale_beta.R", field_zero(r.R - data.R, s));
    add("scale_beta.T", field_zero(r.T - t_closed, s));
    add("scale_beta.c_TR", scalar_zero(r.c_tr - (c_tr + r_log), s));
  }
  if (unit_lambda && unit_mu) {
    const Expr& d_xr = t(FramePair::XR, FrameSlot::R);
    const Expr& d_wr = t(FramePair::WR, FrameSlot::R);
    const Expr& d_tr = t(FramePair::TR, FrameSlot::R);
    VectorField r_closed = (-(nu * nu) - apply(data.X, nu) + nu * d_xr) * data.W +
                           (apply(data.W, nu) - nu * d_wr) * data.X + (-nu) * data.T + data.R;
    add("shear_beta.R", field_zero(r.R - r_closed, s));
    add("shear_beta.T", field_zero(r.T - (nu * data.W + data.T), s));
    Expr c_closed = c_tr - nu * apply(data.W, nu) - apply(data.T, nu) + nu * nu * d_wr + nu * d_tr;
    add("shear_beta.c_TR", scalar_zero(r.c_tr - c_closed, s));
  }
  return r;
}

Dbeta2Report dbeta2_criterion(const EngelData& data, const Sampler& s) {
  BracketTable t = compute_bracket_table(data);
  Dbeta2Report r;
  r.criterion = scalar_zero(t(FramePair::WR, FrameSlot::W) + t(FramePair::XR, FrameSlot::X), s);
  if (!r.criterion.holds()) return r;
  const Expr& c_wx = t(FramePair::WX, FrameSlot::T);
  auto nv = s.nonvanishing(c_wx);
  if (!nv.holds) throw DegenerateFrameError("c_WX vanishes", nv.witness);
  r.mu = reduce_trig(one() / c_wx);
  DiffForm d = exterior_derivative(*r.mu * data.beta);
  r.dbeta2 = form_zero(wedge(d, d), s);
  return r;
}

SymmetryReport even_contact_symmetry(const DiffForm& alpha, const Sampler& s) {
  require_dimension(alpha, 4, "even_contact_symmetry");
  const Space& space = alpha.space();
  DiffForm da = exterior_derivative(alpha);
  SymmetryReport r;
  r.dalpha_squared = form_zero(wedge(da, da), s);
  if (!r.dalpha_squared.holds())
    throw PreconditionError("d alpha ^ d alpha does not vanish [" + to_string(*r.dalpha_squared.witness) + "]");
  auto nv = nonvanishing(map_coefficients(wedge(alpha, da), reduce_trig), s);
  if (!nv.holds) throw DegenerateFrameError("alpha ^ d alpha vanishes", nv.witness);

  int n = space->dim();
  std::optional<VectorField> found;
  for (int k = n - 1; k >= 0 && !found; --k) {
    std::vector<bool> pick(static_cast<std::size_t>(n), false);
    std::fill(pick.begin(), pick.begin() + k, true);
    do {
      std::vector<KernelCondition> conditions{{da, zero()}, {alpha, one()}};
      for (int j = 0; j < n; ++j)
        if (pick[static_cast<std::size_t>(j)]) conditions.push_back({DiffForm::basis(space, j), zero()});
      found = try_solve(conditions, s);
    } while (!found && std::prev_permutation(pick.begin(), pick.end()));
  }
  if (!found)
    throw DegenerateFrameError("ker d alpha is not 2-dimensional", s.witness_at(s.points().front(), 0.0));
  r.Z = *found;
  r.kernel = form_zero(interior_product(r.Z, da), s);
  r.normalized = scalar_zero(pairing(alpha, r.Z) - one(), s);
  r.preserves = form_zero(lie_derivative(r.Z, alpha), s);
  return r;
}

VolumePreservingReport volume_preserving_conditions(const EngelData& data, const Sampler& s) {
  DiffForm da = exterior_derivative(data.alpha);
  return {form_zero(interior_product(data.W, da), s), form_zero(interior_product(data.R, da), s),
          form_zero(wedge(data.beta, da), s)};
}

EngelData construct_forms_from_framing(const VectorField& W, const VectorField& X, const Sampler& s) {
  if (W.space()->dim() != 4) throw PreconditionError("construct_forms_from_framing needs dimension 4");
  VectorField Y = bracket(W, X);
  VectorField Z = bracket(X, Y);
  auto theta = dual_coframe({W, X, Y, Z}, s);
  DiffForm alpha = map_coefficients(theta[3], reduce_trig);
  DiffForm beta = map_coefficients(theta[2], reduce_trig);
  auto v = check_engel_forms(alpha, beta, s);
  if (!v.even_contact.holds) throw DegenerateFrameError("alpha ^ d alpha vanishes", v.even_contact.witness);
  if (!v.transverse.holds) throw DegenerateFrameError("alpha ^ beta ^ d beta vanishes", v.transverse.witness);
  if (!v.flag.holds()) throw DegenerateFrameError("alpha ^ d alpha ^ beta does not vanish", *v.flag.witness);
  return make_engel_data(alpha, beta, W, X, s);
}

}  // namespace engelkit
