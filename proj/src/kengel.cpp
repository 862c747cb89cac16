#include "engelkit/kengel.hpp"

#include <numbers>

#include "engelkit/contact.hpp"
#include "engelkit/error.hpp"
#include "engelkit/normalize.hpp"
#include "engelkit/parse.hpp"
#include "support.hpp"

namespace engelkit {
namespace {

using detail::field_zero;
using detail::form_zero;
using detail::fresh_coordinate_name;
using detail::scalar_zero;
using detail::worst;

DiffForm tidy(const DiffForm& w) { return map_coefficients(w, reduce_trig); }

Expr det4(const VectorField& a, const VectorField& b, const VectorField& c, const VectorField& d) {
  return determinant({a.components(), b.components(), c.components(), d.components()});
}

std::string describe(const NamedVerdict& v) {
  std::string out = v.name + " does not vanish";
  if (v.verdict.witness) out += " [" + to_string(*v.verdict.witness) + "]";
  return out;
}

void require_all(const std::vector<NamedVerdict>& vs, const std::string& what) {
  for (const auto& v : vs)
    if (!v.verdict.holds()) throw PreconditionError(what + ": " + describe(v));
}

void require(const NonvanishingVerdict& v, const std::string& what) {
  if (!v.holds) throw PreconditionError(what + " [" + to_string(v.witness) + "]");
}

DiffForm negate(const DiffForm& w) { return Expr::integer(-1) * w; }

DiffForm substitute_coefficients(const DiffForm& w, const std::string& name, const Expr& value) {
  std::vector<std::pair<DiffForm::Mask, Expr>> terms;
  for (const auto& [mask, coeff] : w.terms()) terms.emplace_back(mask, substitute(coeff, name, value));
  return DiffForm::from_terms(w.space(), w.degree(), terms);
}

}  // namespace

KEngelCheck kengel_check(const EngelData& data, const Metric& g, const VectorField& Z, const Sampler& s) {
  KEngelCheck r;
  VectorField zw = bracket(Z, data.W);
  VectorField zx = bracket(Z, data.X);
  r.engel_field = {
      {"det(W,X,[Z,W],T)", scalar_zero(det4(data.W, data.X, zw, data.T), s)},
      {"det(W,X,[Z,W],R)", scalar_zero(det4(data.W, data.X, zw, data.R), s)},
      {"det(W,X,[Z,X],T)", scalar_zero(det4(data.W, data.X, zx, data.T), s)},
      {"det(W,X,[Z,X],R)", scalar_zero(det4(data.W, data.X, zx, data.R), s)},
  };
  r.killing = killing_check(g, Z, s);
  r.orthogonal = {{"g(Z,W)", scalar_zero(g(Z, data.W), s)},
                  {"g(Z,X)", scalar_zero(g(Z, data.X), s)},
                  {"g(Z,T)", scalar_zero(g(Z, data.T), s)}};
  return r;
}

std::vector<NamedVerdict> kengel_form_conditions(const DiffForm& alpha, const DiffForm& beta, const Sampler& s) {
  DiffForm da = exterior_derivative(alpha);
  DiffForm db = exterior_derivative(beta);
  return {{"dalpha^2", form_zero(wedge(da, da), s)},
          {"dbeta^2", form_zero(wedge(db, db), s)},
          {"beta^dalpha", form_zero(wedge(beta, da), s)}};
}

std::vector<NamedVerdict> kengel_invariants(const EngelData& data, const VectorField& Z, const Sampler& s) {
  std::vector<NamedVerdict> out = kengel_form_conditions(data.alpha, data.beta, s);
  out.push_back({"R - Z", field_zero(data.R - Z, s)});
  BracketTable t = compute_bracket_table(data);
  Expr one = Expr::integer(1);
  out.push_back({"c_WX - 1", scalar_zero(t(FramePair::WX, FrameSlot::T) - one, s)});
  out.push_back({"d_XT - 1", scalar_zero(t(FramePair::XT, FrameSlot::R) - one, s)});
  out.push_back({"[W,R]", field_zero(bracket(data.W, data.R), s)});
  out.push_back({"[X,R]", field_zero(bracket(data.X, data.R), s)});
  out.push_back({"[T,R]", field_zero(bracket(data.T, data.R), s)});
  for (auto [pair, slot] : {std::pair{FramePair::WX, FrameSlot::W}, std::pair{FramePair::WT, FrameSlot::W},
                            std::pair{FramePair::WT, FrameSlot::X}, std::pair{FramePair::XT, FrameSlot::W}})
    out.push_back({"L_R " + coefficient_name(pair, slot), scalar_zero(apply(data.R, t(pair, slot)), s)});
  out.push_back({"b_WX", scalar_zero(t(FramePair::WX, FrameSlot::X), s)});
  out.push_back({"d_WR", scalar_zero(t(FramePair::WR, FrameSlot::R), s)});
  out.push_back({"b_XT + a_WT",
                 scalar_zero(t(FramePair::XT, FrameSlot::X) + t(FramePair::WT, FrameSlot::W), s)});
  return out;
}

KEngelFraming kengel_framing(const EngelData& data, const Metric& g, const VectorField& Z, const Sampler& s) {
  KEngelCheck check = kengel_check(data, g, Z, s);
  require_all(check.engel_field, "Z is not an Engel field");
  require_all(check.killing, "Z is not Killing");
  require_all(check.orthogonal, "Z is not orthogonal to E");

  DiffForm alpha = tidy(Expr::integer(1) / pairing(data.alpha, Z) * data.alpha);
  DiffForm beta = tidy(negate(lie_derivative(data.X, alpha)));
  EngelData framed = adapt(make_engel_data(alpha, beta, data.W, data.X, s), s);

  KEngelFraming r;
  r.kdata = {framed, g, Z, std::nullopt};
  r.invariants = kengel_invariants(framed, Z, s);
  return r;
}

ConverseMetric converse_metric(const EngelData& data, const Sampler& s) {
  ConverseMetric r;
  r.conditions = kengel_form_conditions(data.alpha, data.beta, s);
  auto comps = components_in({data.W, data.X, data.T, data.R}, bracket(data.R, data.X), s);
  r.conditions.push_back({"[R,X] W-component", scalar_zero(comps[0], s)});
  r.conditions.push_back({"[R,X] T-component", scalar_zero(comps[2], s)});
  r.conditions.push_back({"[R,X] R-component", scalar_zero(comps[3], s)});
  require_all(r.conditions, "no commuting framing");

  r.framing = adapt(data, s);
  r.g = orthonormal({r.framing.W, r.framing.X, r.framing.T, r.framing.R}, s);
  r.check = kengel_check(r.framing, r.g, r.framing.R, s);
  return r;
}

RhoReport rho_criterion(const EngelData& data, const Sampler& s) {
  RhoReport r;
  DiffForm da = exterior_derivative(data.alpha);
  r.preconditions = {{"dalpha^2", form_zero(wedge(da, da), s)},
                     {"beta + L_X alpha", form_zero(data.beta + lie_derivative(data.X, data.alpha), s)}};
  require_all(r.preconditions, "rho criterion does not apply");

  const DiffForm& rho = data.coframe[0];
  r.criterion = form_zero(wedge(lie_derivative(data.R, rho), data.beta), s);
  BracketTable t = compute_bracket_table(data);
  r.table = worst({scalar_zero(t(FramePair::WR, FrameSlot::W), s), scalar_zero(t(FramePair::XR, FrameSlot::W), s)});
  r.drho = tidy(exterior_derivative(rho));
  r.drho_zero = zero_test(r.drho, s);
  return r;
}

KEngelFraming rank1_perturbation(const KEngelData& kdata, const VectorField& Ri, const Sampler& s) {
  const EngelData& d = kdata.data;
  require_all({{"[R_i,W]", field_zero(bracket(Ri, d.W), s)},
               {"[R_i,X]", field_zero(bracket(Ri, d.X), s)},
               {"[R_i,T]", field_zero(bracket(Ri, d.T), s)},
               {"[R_i,R]", field_zero(bracket(Ri, d.R), s)}},
              "R_i does not commute with the framing");
  Expr f = reduce_trig(pairing(d.alpha, Ri));
  NonvanishingVerdict nv = s.nonvanishing(f);
  if (!nv.holds) throw DegenerateFrameError("alpha(R_i) vanishes", nv.witness);

  DiffForm alpha = tidy(Expr::integer(1) / f * d.alpha);
  DiffForm beta = tidy(negate(lie_derivative(d.X, alpha)));
  ConverseMetric cm = converse_metric(make_engel_data(alpha, beta, d.W, d.X, s), s);
  return kengel_framing(cm.framing, cm.g, Ri, s);
}

BoothbyWangReport boothby_wang(const DiffForm& lambda, const VectorField& L, const DiffForm& a_loc,
                               const Sampler& s) {
  const Space& base = lambda.space();
  if (base->dim() != 3) throw PreconditionError("the base of a Boothby-Wang bundle must be 3-dimensional");
  BoothbyWangReport r;
  DiffForm volume = wedge(lambda, exterior_derivative(lambda));
  r.contact = nonvanishing(tidy(volume), s);
  r.legendrian = scalar_zero(pairing(lambda, L), s);
  DiffForm omega = interior_product(L, volume);
  r.closed = form_zero(exterior_derivative(omega), s);
  r.primitive = form_zero(exterior_derivative(a_loc) - omega, s);
  require(r.contact, "lambda is not a contact form");
  require_all({{"lambda(L)", r.legendrian}, {"d omega", r.closed}, {"d a_loc - omega", r.primitive}},
              "Boothby-Wang precondition fails");

  r.fibre = fresh_coordinate_name(base, "t");
  Space product = base->with_coordinate({r.fibre, {0.0, 2 * std::numbers::pi, true}}, "d" + r.fibre);
  Sampler sp = make_sampler(product, s.policy());
  int last = product->dim() - 1;
  VectorField fibre = VectorField::basis(product, last);

  DiffForm alpha = DiffForm::basis(product, last) + lift(a_loc, product);
  DiffForm beta = lift(lambda, product);
  VectorField W = lift(L, product) - pairing(a_loc, L) * fibre;
  VectorField X = complete_framing(alpha, beta, W, sp);
  EngelData data = adapt(make_engel_data(alpha, beta, W, X, sp), sp);

  r.engel = check_engel_forms(alpha, beta, sp);
  r.kengel_forms = kengel_form_conditions(alpha, beta, sp);
  r.reeb_is_fibre = field_zero(data.R - fibre, sp);
  r.invariance = {{"L_R alpha", form_zero(lie_derivative(data.R, alpha), sp)},
                  {"L_R beta", form_zero(lie_derivative(data.R, beta), sp)},
                  {"[R,W]", field_zero(bracket(data.R, data.W), sp)},
                  {"[R,X]", field_zero(bracket(data.R, data.X), sp)},
                  {"[R,T]", field_zero(bracket(data.R, data.T), sp)}};
  r.kdata = {data, orthonormal({data.W, data.X, data.T, data.R}, sp), data.R, 1};
  return r;
}

T2BundleReport t2_bundle_condition(const T2BundleInput& in, const Sampler& s) {
  const Space& sigma = in.sigma;
  if (sigma->dim() != 2 || sigma->has_lie_directions())
    throw PreconditionError("the base surface must be a 2-dimensional chart");
  Expr n = Expr::rational(Rational(in.n1) - in.epsilon * Rational(in.n2));
  Expr n2 = Expr::integer(in.n2);
  DiffForm omega = exterior_derivative(in.area_primitive);
  DiffForm df = exterior_derivative(DiffForm::scalar(sigma, in.f));
  DiffForm dg = exterior_derivative(DiffForm::scalar(sigma, in.g));
  DiffForm dalpha0 = exterior_derivative(in.alpha0);
  DiffForm tilde = (in.f * n + n2) * omega + dalpha0;

  T2BundleReport r;
  r.first = s.nonvanishing_any(
      {reduce_trig(df.coefficient(1)), reduce_trig(df.coefficient(2)), reduce_trig(tilde.coefficient(3))});
  r.second = nonvanishing(
      tidy((n * in.g * in.g) * omega + in.g * exterior_derivative(in.beta0) + wedge(in.beta0, dg)), s);
  r.third = form_zero(in.g * tilde + wedge(in.beta0, df), s);
  r.third_constant_f = form_zero((n * in.g) * omega + in.g * dalpha0 + wedge(in.beta0, df), s);
  if (!r.conditions_hold()) return r;

  std::string u1 = fresh_coordinate_name(sigma, "u1");
  Space once = sigma->with_coordinate({u1, {0.0, 1.0, true}}, "d" + u1);
  std::string u2 = fresh_coordinate_name(once, "u2");
  Space total = once->with_coordinate({u2, {0.0, 1.0, true}}, "d" + u2);
  Sampler sp = make_sampler(total, s.policy());

  DiffForm p = lift(in.area_primitive, total);
  DiffForm theta1 = DiffForm::basis(total, 2) + Expr::integer(in.n1) * p;
  DiffForm theta2 = DiffForm::basis(total, 3) + n2 * p;
  Expr eps = Expr::rational(in.epsilon);
  DiffForm fibre_form = theta1 - eps * theta2;
  DiffForm alpha = in.f * fibre_form + theta2 + lift(in.alpha0, total);
  DiffForm beta = in.g * fibre_form + lift(in.beta0, total);

  r.engel = check_engel_forms(alpha, beta, sp);
  if (!r.engel->holds()) return r;
  r.data = make_engel_data(alpha, beta, sp);
  r.kengel_forms = kengel_form_conditions(alpha, beta, sp);
  VectorField expected = eps * VectorField::basis(total, 2) + VectorField::basis(total, 3);
  r.reeb = field_zero(r.data->R - expected, sp);
  return r;
}

Surd parse_surd(std::string_view text, const std::vector<std::pair<std::string, long>>& generators) {
  SymbolTable table;
  for (const auto& [name, radicand] : generators) table.coordinates.push_back(name);
  Expr e = normalize(parse(text, table));
  Expr constant = e;
  Surd out;
  for (const auto& [name, radicand] : generators) {
    auto q = as_rational(differentiate(e, name));
    if (!q) throw ParseError("lattice entry is not linear in " + name + ": " + std::string(text), 0);
    out = out + Surd::root(radicand, *q);
    constant = substitute(constant, name, Expr::integer(0));
  }
  auto q0 = as_rational(normalize(constant));
  if (!q0) throw ParseError("lattice entry is not a rational combination: " + std::string(text), 0);
  return out + Surd(*q0);
}

TorusFamily torus_family(const LatticeSpec& lattice, const SamplingPolicy& policy) {
  for (const auto& [name, radicand] : lattice.generators)
    if (radicand < 2 || !is_squarefree(radicand))
      throw PreconditionError("generator " + name + " must be the square root of a squarefree integer > 1");
  const auto& e = lattice.vectors;
  for (std::size_t j = 0; j < 4; ++j)
    if (!(e[3][j] == Surd(Rational(j == 3 ? 1 : 0))))
      throw PreconditionError("the fourth lattice vector must be (0,0,0,1)");
  for (std::size_t i = 0; i < 4; ++i)
    if (!e[i][3].is_rational() || !is_integer(e[i][3].rational_part()))
      throw PreconditionError("lattice vector " + std::to_string(i + 1) + " has a non-integral t-component");

  std::vector<std::vector<Surd>> columns(4, std::vector<Surd>(4));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) columns[j][i] = e[i][j];
  std::vector<Surd> coords;
  try {
    coords = solve_surd(columns, {Surd(), Surd(), Surd(Rational(1)), Surd()});
  } catch (const Error& err) {
    throw PreconditionError(std::string("degenerate lattice: ") + err.what());
  }

  Space space = FrameSpace::Builder()
                    .coordinate("t", {0, 1, true})
                    .coordinate("x", {0, 1, true})
                    .coordinate("y", {0, 1, true})
                    .coordinate("z", {0, 1, true})
                    .build();
  Sampler sampler = make_sampler(space, policy);
  Expr angle = Expr::integer(2) * Expr::pi() * Expr::coord("t");
  Expr c = Expr::cos(angle);
  Expr sn = Expr::sin(angle);
  Expr zero = Expr::integer(0);
  Expr one = Expr::integer(1);
  auto form = [&](std::vector<Expr> comps) {
    std::vector<std::pair<DiffForm::Mask, Expr>> terms;
    for (std::size_t i = 0; i < comps.size(); ++i) terms.emplace_back(DiffForm::Mask{1} << i, comps[i]);
    return DiffForm::from_terms(space, 1, terms);
  };
  DiffForm alpha = form({zero, -c, -sn, one});
  DiffForm beta = form({zero, -sn, c, zero});
  VectorField W(space, {zero, c, sn, one});
  EngelData data = adapt(make_engel_data(alpha, beta, W, VectorField::basis(space, 0), sampler), sampler);

  TorusFamily out;
  std::copy(coords.begin(), coords.end(), out.z_coordinates.begin());
  out.rank = rational_span_rank(coords);
  out.kdata = {data, orthonormal({data.W, data.X, data.T, data.R}, sampler), VectorField::basis(space, 3), out.rank};
  return out;
}

FillingReport filling_check(const KEngelData& kdata, const Sampler& s) {
  if (!kdata.rank || *kdata.rank != 1) throw PreconditionError("a contact filling needs K-Engel data of rank 1");
  const EngelData& d = kdata.data;
  const Space& base = d.space;

  FillingReport r;
  r.radial = fresh_coordinate_name(base, "r");
  Space product = base->with_coordinate({r.radial, {0.5, 1.5, false}}, "d" + r.radial);
  Sampler sp = make_sampler(product, s.policy());
  int radial = product->dim() - 1;
  Expr rv = Expr::coord(r.radial);
  Expr one = Expr::integer(1);

  DiffForm alpha = lift(d.alpha, product);
  DiffForm eta = lift(d.beta, product) + (rv * rv) * alpha;
  DiffForm deta = exterior_derivative(eta);
  DiffForm top = wedge(eta, wedge(deta, deta));
  r.contact = nonvanishing(tidy(top), sp);

  VectorField L = (one / rv) * VectorField::basis(product, radial);
  auto on_boundary = [&](const DiffForm& w) {
    return restrict_to_base(tidy(pull_back_fiber(w, radial, one)), base);
  };
  DiffForm beta_m = on_boundary(eta);
  DiffForm alpha_m = on_boundary(lie_derivative(L, eta));
  Expr factor = Expr::rational(r.lie_factor);
  r.boundary = form_zero(beta_m - (d.beta + d.alpha), s);
  r.lie = form_zero(alpha_m - factor * d.alpha, s);
  r.same_distribution = form_zero(wedge(alpha_m, beta_m) - factor * wedge(d.alpha, d.beta), s);
  DiffForm dalpha_m = exterior_derivative(alpha_m);
  r.even_contact = nonvanishing(tidy(wedge(alpha_m, dalpha_m)), s);
  r.flag = form_zero(wedge(alpha_m, wedge(beta_m, dalpha_m)), s);
  r.volume = form_zero(substitute_coefficients(lie_derivative(L, top), r.radial, one), sp);
  return r;
}

}  // namespace engelkit
