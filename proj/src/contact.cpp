#include "engelkit/contact.hpp"

#include <algorithm>

#include "engelkit/calculus.hpp"
#include "engelkit/error.hpp"
#include "engelkit/linalg.hpp"
#include "engelkit/normalize.hpp"
#include "support.hpp"

namespace engelkit {
namespace {

using detail::field_zero;
using detail::form_zero;
using detail::scalar_zero;
using detail::worst;

int fiber_direction(const Contactization& c) { return c.space->dim() - 1; }

}  // namespace

VectorField lift(const VectorField& v, const Space& product) {
  std::vector<Expr> comps = v.components();
  comps.resize(static_cast<std::size_t>(product->dim()), Expr::integer(0));
  return VectorField(product, comps);
}

DiffForm lift(const DiffForm& w, const Space& product) {
  std::vector<std::pair<DiffForm::Mask, Expr>> terms(w.terms().begin(), w.terms().end());
  return DiffForm::from_terms(product, w.degree(), terms);
}

DiffForm pull_back_fiber(const DiffForm& w, int direction, const Expr& value) {
  const Space& space = w.space();
  int coord = space->direction(direction).coordinate;
  if (coord < 0) throw PreconditionError("pull_back_fiber needs a coordinate direction");
  const std::string& name = space->coordinates()[static_cast<std::size_t>(coord)].name;
  DiffForm dvalue = exterior_derivative(DiffForm::scalar(space, value));
  DiffForm out(space, w.degree());
  for (const auto& [mask, coeff] : w.terms()) {
    DiffForm term = DiffForm::scalar(space, substitute(coeff, name, value));
    for (int i = 0; i < space->dim(); ++i) {
      if (!(mask & (DiffForm::Mask{1} << i))) continue;
      term = wedge(term, i == direction ? dvalue : DiffForm::basis(space, i));
    }
    out = out + term;
  }
  return out;
}

DiffForm restrict_to_base(const DiffForm& w, const Space& base) {
  std::vector<std::string> coords;
  for (const auto& c : base->coordinates()) coords.push_back(c.name);
  std::vector<std::pair<DiffForm::Mask, Expr>> terms;
  for (const auto& [mask, coeff] : w.terms()) {
    if (mask >> base->dim()) throw PreconditionError("form has a component along the fiber");
    std::vector<std::string> used;
    collect_names(coeff, true, used);
    for (const auto& u : used)
      if (std::find(coords.begin(), coords.end(), u) == coords.end())
        throw PreconditionError("coefficient depends on the fiber coordinate " + u);
    terms.emplace_back(mask, coeff);
  }
  return DiffForm::from_terms(base, w.degree(), terms);
}

Contactization contactize(const DiffForm& alpha, const DiffForm& beta, const Sampler& s) {
  const Space& base = alpha.space();
  if (alpha.degree() != 1 || beta.degree() != 1) throw DegreeError("contactize needs 1-forms");
  Contactization c;
  c.fiber = detail::fresh_coordinate_name(base, "s");
  c.space = base->with_coordinate({c.fiber, {-1.0, 1.0, false}}, "d" + c.fiber);
  Sampler sp = make_sampler(c.space, s.policy());
  Expr sv = Expr::coord(c.fiber);
  c.alpha = lift(alpha, c.space);
  c.beta = lift(beta, c.space);
  c.eta = c.beta + sv * c.alpha;

  DiffForm deta = exterior_derivative(c.eta);
  c.contact = nonvanishing(map_coefficients(wedge(c.eta, wedge(deta, deta)), reduce_trig), sp);
  if (!c.contact.holds)
    throw PreconditionError("eta ^ d eta ^ d eta vanishes, the forms are not Engel [" +
                            to_string(c.contact.witness) + "]");

  DiffForm da = exterior_derivative(c.alpha);
  DiffForm db = exterior_derivative(c.beta);
  DiffForm ds = DiffForm::basis(c.space, c.space->dim() - 1);
  Expr two = Expr::integer(2);
  DiffForm expected = wedge(db, db) + (sv * sv) * wedge(da, da) + (two * sv) * wedge(da, db) +
                      two * wedge(ds, wedge(c.alpha, db)) +
                      (two * sv) * wedge(ds, wedge(c.alpha, da));
  c.expansion = form_zero(wedge(deta, deta) - expected, sp);
  c.restriction = form_zero(pull_back_fiber(c.eta, c.space->dim() - 1, Expr::integer(0)) - c.beta, sp);
  return c;
}

Contactization contactize(const EngelData& data, const Sampler& s) {
  Contactization c = contactize(data.alpha, data.beta, s);
  c.source = data;
  return c;
}

Sampler fiber_sampler(const Contactization& c, const Sampler& base) {
  return make_sampler(c.space, base.policy());
}

ContactReebReport reeb_of_contactization(const Contactization& c, const Sampler& s) {
  if (!c.source) throw PreconditionError("the Reeb formula needs the Engel framing of the source");
  EngelData data = adapt(*c.source, s);
  BracketTable t = compute_bracket_table(data);
  Sampler sp = fiber_sampler(c, s);
  Expr sv = Expr::coord(c.fiber);
  VectorField fiber = VectorField::basis(c.space, fiber_direction(c));

  ContactReebReport r;
  r.c_tr = reduce_trig(t(FramePair::TR, FrameSlot::T));
  const Expr& d_tr = t(FramePair::TR, FrameSlot::R);
  const Expr& d_wr = t(FramePair::WR, FrameSlot::R);
  r.formula = lift(data.T, c.space) + sv * lift(data.W, c.space) +
              (r.c_tr + sv * d_tr + sv * sv * d_wr) * fiber;
  r.formula = map_components(r.formula, reduce_trig);
  DiffForm deta = exterior_derivative(c.eta);
  r.solved = solve_kernel({{c.eta, Expr::integer(1)}, {deta, Expr::integer(0)}}, sp);
  r.agreement = field_zero(r.formula - r.solved, sp);
  r.normalized = scalar_zero(pairing(c.eta, r.formula) - Expr::integer(1), sp);
  r.kernel = form_zero(interior_product(r.formula, deta), sp);
  r.slice_component = substitute(r.formula[fiber_direction(c)], c.fiber, Expr::integer(0));
  return r;
}

bool GraphicalPullback::holds() const {
  if (!engel.holds() || !beta_matches.holds() || !alpha_matches.holds()) return false;
  return std::all_of(shear_law.begin(), shear_law.end(),
                     [](const NamedVerdict& v) { return v.verdict.holds(); });
}

GraphicalPullback graphical_pullback(const EngelData& data, const Expr& g, const Sampler& s) {
  GraphicalPullback r;
  DiffForm new_beta = data.beta + g * data.alpha;
  r.engel = check_engel_forms(data.alpha, new_beta, s);
  if (!r.engel.holds()) throw PreconditionError("beta + g alpha does not define an Engel structure");
  r.data = make_engel_data(data.alpha, new_beta, data.W, data.X, s);

  Contactization c = contactize(data, s);
  int dir = fiber_direction(c);
  const Space& base = data.space;
  DiffForm on_graph = restrict_to_base(pull_back_fiber(c.eta, dir, g), base);
  VectorField fiber = VectorField::basis(c.space, dir);
  DiffForm alpha_graph = restrict_to_base(pull_back_fiber(lie_derivative(fiber, c.eta), dir, g), base);
  r.beta_matches = form_zero(on_graph - new_beta, s);
  r.alpha_matches = form_zero(alpha_graph - data.alpha, s);
  r.shear_law = transform_forms(data, Expr::integer(1), Expr::integer(1), g, s).closed_forms;
  return r;
}

ContactomorphismReport contactomorphism_data(const EngelData& old_data, const DiffForm& new_alpha,
                                             const DiffForm& new_beta, const Sampler& s) {
  ContactomorphismReport r;
  r.lambda = reduce_trig(pairing(new_alpha, old_data.R));
  r.mu = reduce_trig(pairing(new_beta, old_data.T));
  r.nu = reduce_trig(pairing(new_beta, old_data.R));
  for (auto [f, name] : {std::pair{r.lambda, "lambda"}, std::pair{r.mu, "mu"}}) {
    auto nv = s.nonvanishing(f);
    if (!nv.holds) throw DegenerateFrameError(std::string(name) + " vanishes", nv.witness);
  }
  r.decomposition = worst({form_zero(new_alpha - r.lambda * old_data.alpha, s),
                           form_zero(new_beta - r.mu * old_data.beta - r.nu * old_data.alpha, s)});
  r.f = reduce_trig(r.mu / r.lambda);
  r.g = reduce_trig(-r.nu / r.lambda);

  Contactization c = contactize(old_data, s);
  Sampler sp = fiber_sampler(c, s);
  Expr sv = Expr::coord(c.fiber);
  DiffForm new_eta = lift(new_beta, c.space) + sv * lift(new_alpha, c.space);
  DiffForm pulled = pull_back_fiber(new_eta, fiber_direction(c), r.f * sv + r.g);
  r.pullback = form_zero(pulled - r.mu * c.eta, sp);
  return r;
}

}  // namespace engelkit
