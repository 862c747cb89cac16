#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <variant>

#include "engelkit/contact.hpp"
#include "engelkit/kengel.hpp"
#include "engelkit/manifest.hpp"
#include "engelkit/metric.hpp"
#include "engelkit/normalize.hpp"
#include "engelkit/parse.hpp"
#include "manifest_ops.hpp"
#include "support.hpp"

namespace engelkit {

namespace detail {

const std::vector<OpSpec>& op_specs() {
  static const std::vector<OpSpec> specs{
      {"reeb_distribution", {"alpha", "beta"}, {}},
      {"engel_data", {}, {"alpha", "beta", "W", "X", "adapt"}},
      {"jacobi_identities", {"data"}, {}},
      {"contact_reeb", {"data"}, {}},
      {"totally_geodesic", {"data", "metric", "distribution"}, {}},
      {"geodesic_bracket_shape", {"data"}, {}},
      {"geodesic_dbeta2", {"data", "metric"}, {}},
      {"dbeta2", {"data"}, {}},
      {"kengel_invariants", {"data", "Z"}, {}},
      {"kengel_check", {"data", "metric", "Z"}, {}},
      {"kengel_framing", {"data", "metric", "Z"}, {}},
      {"boothby_wang", {"lambda", "L", "primitive"}, {}},
      {"filling_check", {"kdata"}, {}},
      {"t2_bundle", {"f", "g", "alpha0", "beta0", "primitive", "n1", "n2", "epsilon"}, {}},
      {"torus_family", {"v1", "v2", "v3", "v4"}, {"generators"}},
      {"jacobi_check", {}, {}},
      {"framing_search", {"W", "X"}, {}},
      {"framing_export", {"search"}, {}},
  };
  return specs;
}

const OpSpec* find_op(const std::string& name) {
  for (const auto& s : op_specs())
    if (s.name == name) return &s;
  return nullptr;
}

namespace {

std::vector<std::string> split_words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

std::string expectation_syntax_error(const std::string& text) {
  auto w = split_words(text);
  if (w.empty()) return "empty expectation";
  if (text.find("==") != std::string::npos) {
    auto pos = text.find("==");
    auto lhs = split_words(text.substr(0, pos));
    if (lhs.size() != 1) return "expected 'OBJECT == LITERAL'";
    if (split_words(text.substr(pos + 2)).empty()) return "missing literal after '=='";
    return "";
  }
  const std::string& k = w[0];
  if (k == "fail") return "";
  if (k == "pass" || k == "exact" || k == "error" || k == "framing" || k == "no_framing")
    return w.size() == 1 ? "" : "'" + k + "' takes no operand";
  if (k == "rank" || k == "commutant_dim")
    return w.size() == 2 && all_digits(w[1]) ? "" : "'" + k + "' takes one non-negative integer";
  return "unknown expectation '" + k + "'";
}

}  // namespace detail

namespace {

using detail::field_zero;
using detail::form_zero;
using detail::scalar_zero;

struct Scalar {
  Space space;
  Expr value;
};

struct LieSearch {
  LieAlgebra4 algebra;
  Space space;
  FramingSearch search;
};

using Object = std::variant<DiffForm, VectorField, Scalar, EngelData, KEngelData, Metric, LieSearch, std::string>;

std::string format_double(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string format_witness(const Witness& w, int digits) {
  std::string out;
  for (const auto& [name, value] : w.point) {
    if (!out.empty()) out += ",";
    out += name + "=" + format_double(value, digits);
  }
  return out + " value=" + format_double(w.value, digits);
}

bool same_expr(const Expr& a, const Expr& b) {
  Expr d = a - b;
  return normalize(d).is_zero_literal() || reduce_trig(d).is_zero_literal();
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

class Runner {
 public:
  Runner(const Manifest& m, const RunOptions& options) : m_(m), options_(options) {}

  TaskResult run(const ManifestTask& task) {
    TaskResult r;
    r.name = task.name;
    r.op = task.op;
    m_.policy.apply(r.policy);
    task.policy.apply(r.policy);
    if (options_.seed) r.policy.seed = *options_.seed;
    if (options_.samples) r.policy.samples = *options_.samples;
    if (options_.tol) r.policy.abs_tol = *options_.tol;
    task_ = &task;
    result_ = &r;
    passed_.reset();
    auto start = std::chrono::steady_clock::now();
    try {
      dispatch(task.op);
    } catch (const ManifestError& e) {
      throw ManifestError("task '" + task.name + "': " + e.what(), e.line() > 0 ? e.line() : task.line);
    } catch (const Error& e) {
      r.error = e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (r.error.empty())
      r.passed = passed_ ? *passed_
                         : std::all_of(r.verdicts.begin(), r.verdicts.end(), [](const auto& v) { return v.holds; });
    for (const auto& [text, line] : task.expects) r.expectations.push_back(check(text, line));
    return r;
  }

 private:
  // ---- references

  const Object& lookup(const std::string& ref) const {
    auto it = objects_.find(ref);
    if (it != objects_.end()) return it->second;
    throw ManifestError("unresolved reference '" + ref + "'", task_->line);
  }

  const std::string& arg(const std::string& key) const {
    const std::string* v = task_->arg(key);
    if (!v) throw ManifestError("missing argument '" + key + "'", task_->line);
    return *v;
  }

  template <class T>
  const T& typed(const std::string& ref, const char* what) const {
    const Object& o = lookup(ref);
    if (const T* p = std::get_if<T>(&o)) return *p;
    throw ManifestError("'" + ref + "' is not " + what, task_->line);
  }

  DiffForm form(const std::string& key) const {
    const std::string& ref = arg(key);
    if (auto it = m_.forms.find(ref); it != m_.forms.end()) return it->second;
    return typed<DiffForm>(ref, "a 1-form");
  }

  VectorField field(const std::string& key) const { return field_ref(arg(key)); }

  VectorField field_ref(const std::string& ref) const {
    if (auto it = m_.fields.find(ref); it != m_.fields.end()) return it->second;
    return typed<VectorField>(ref, "a vector field");
  }

  EngelData data(const std::string& key) const {
    const Object& o = lookup(arg(key));
    if (const auto* d = std::get_if<EngelData>(&o)) return *d;
    if (const auto* k = std::get_if<KEngelData>(&o)) return k->data;
    throw ManifestError("'" + arg(key) + "' is not Engel data", task_->line);
  }

  Metric metric(const std::string& key) const {
    const std::string& ref = arg(key);
    if (auto it = m_.metrics.find(ref); it != m_.metrics.end()) {
      std::vector<VectorField> frame;
      for (const auto& f : it->second.fields) frame.push_back(field_ref(f));
      if (frame.empty()) throw ManifestError("metric '" + ref + "' has no fields", it->second.line);
      return orthonormal(frame, sampler(frame[0].space()));
    }
    const Object& o = lookup(ref);
    if (const auto* g = std::get_if<Metric>(&o)) return *g;
    if (const auto* k = std::get_if<KEngelData>(&o)) return k->g;
    throw ManifestError("'" + ref + "' is not a metric", task_->line);
  }

  bool flag(const std::string& key) const {
    const std::string* v = task_->arg(key);
    if (!v) return false;
    if (*v == "true" || *v == "yes") return true;
    if (*v == "false" || *v == "no") return false;
    throw ManifestError("'" + key + "' must be true or false", task_->line);
  }

  Sampler sampler(const Space& space) const { return make_sampler(space, result_->policy); }

  // ---- results

  void verdict(const std::string& name, const ZeroVerdict& v) {
    result_->verdicts.push_back({name, to_string(v.kind), v.max_abs, v.holds(), v.witness});
  }
  void verdict(const std::string& name, const NonvanishingVerdict& v) {
    VerdictLine line{name, v.holds ? "Nonvanishing" : "Vanishing", v.min_abs, v.holds, std::nullopt};
    if (!v.holds) line.witness = v.witness;
    result_->verdicts.push_back(std::move(line));
  }
  void verdicts(const std::vector<NamedVerdict>& vs) {
    for (const auto& v : vs) verdict(v.name, v.verdict);
  }

  void publish(const std::string& name, Object o) {
    std::string printed;
    if (const auto* f = std::get_if<VectorField>(&o)) printed = to_string(*f);
    if (const auto* w = std::get_if<DiffForm>(&o)) printed = to_string(*w);
    if (const auto* s = std::get_if<Scalar>(&o)) printed = to_string(s->value);
    if (const auto* t = std::get_if<std::string>(&o)) printed = *t;
    if (!printed.empty()) result_->objects.emplace_back(name, printed);
    objects_[task_->name + "." + name] = std::move(o);
  }

  void publish_main(Object o) { objects_[task_->name] = std::move(o); }

  void publish_data(const EngelData& d) {
    publish("alpha", d.alpha);
    publish("beta", d.beta);
    publish("W", d.W);
    publish("X", d.X);
    publish("T", d.T);
    publish("R", d.R);
  }

  void publish_kdata(const KEngelData& k) {
    publish_main(k);
    publish_data(k.data);
    publish("Z", k.Z);
    publish("g", k.g);
    if (k.rank) publish("rank", std::to_string(*k.rank));
  }

  // ---- expectations

  ExpectationResult check(const std::string& text, int line) const {
    const TaskResult& r = *result_;
    ExpectationResult e{text, false, ""};
    auto printed = [&](const std::string& name) -> const std::string* {
      for (const auto& [k, v] : r.objects)
        if (k == name) return &v;
      return nullptr;
    };
    auto errored = [&] {
      e.detail = "error: " + r.error;
      return e;
    };
    auto pos = text.find("==");
    if (pos != std::string::npos) {
      if (!r.error.empty()) return errored();
      std::string name = detail::split_words(text.substr(0, pos))[0];
      std::string literal = text.substr(pos + 2);
      literal.erase(0, literal.find_first_not_of(' '));
      e.met = matches(name, literal, line, e.detail);
      return e;
    }
    auto w = detail::split_words(text);
    const std::string& k = w[0];
    if (k == "error") {
      e.met = !r.error.empty();
      if (!e.met) e.detail = "no error";
      return e;
    }
    if (!r.error.empty()) return errored();
    if (k == "pass" || k == "fail") {
      if (w.size() == 1) {
        e.met = (k == "pass") == r.passed;
        if (!e.met) e.detail = r.passed ? "passed" : "failed";
        return e;
      }
      std::string name = text.substr(text.find("fail") + 4);
      name.erase(0, name.find_first_not_of(' '));
      bool found = false;
      for (const auto& v : r.verdicts)
        if (v.name == name) {
          found = true;
          e.met = e.met || !v.holds;
        }
      if (!found) e.detail = "no verdict named '" + name + "'";
      else if (!e.met) e.detail = "verdict holds";
      return e;
    }
    if (k == "exact") {
      e.met = true;
      for (const auto& v : r.verdicts)
        if (v.kind == "SampledZero" || v.kind == "Nonzero") {
          e.met = false;
          e.detail = v.name + " is " + v.kind;
          break;
        }
      return e;
    }
    std::string object = k == "framing" || k == "no_framing" ? "found" : k;
    std::string want = k == "framing" ? "yes" : k == "no_framing" ? "no" : w[1];
    const std::string* got = printed(object);
    if (!got) {
      e.detail = "operation reports no " + object;
      return e;
    }
    e.met = *got == want;
    if (!e.met) e.detail = "got " + *got;
    return e;
  }

  bool matches(const std::string& name, const std::string& literal, int line, std::string& detail) const {
    auto it = objects_.find(task_->name + "." + name);
    if (it == objects_.end()) {
      detail = "operation reports no " + name;
      return false;
    }
    auto fail = [&](const std::string& got) {
      detail = "got " + got;
      return false;
    };
    try {
      if (const auto* f = std::get_if<VectorField>(&it->second)) {
        VectorField want = parse_field(literal, f->space(), m_.bindings);
        for (int i = 0; i < f->space()->dim(); ++i)
          if (!same_expr((*f)[i], want[i])) return fail(to_string(*f));
        return true;
      }
      if (const auto* w = std::get_if<DiffForm>(&it->second)) {
        if (w->degree() != 1) return fail(to_string(*w));
        DiffForm want = parse_one_form(literal, w->space(), m_.bindings);
        auto a = w->coefficients(), b = want.coefficients();
        for (std::size_t i = 0; i < a.size(); ++i)
          if (!same_expr(a[i], b[i])) return fail(to_string(*w));
        return true;
      }
      if (const auto* s = std::get_if<Scalar>(&it->second)) {
        SymbolTable symbols = s->space->symbols();
        symbols.substitutions = m_.bindings;
        if (!same_expr(s->value, parse(literal, symbols))) return fail(to_string(s->value));
        return true;
      }
      if (const auto* t = std::get_if<std::string>(&it->second)) return *t == literal || fail(*t);
    } catch (const ManifestError& e) {
      throw ManifestError(e.what(), line);
    } catch (const Error& e) {
      throw ManifestError(e.what(), line);
    }
    detail = name + " has no printed form";
    return false;
  }

  // ---- operations

  void dispatch(const std::string& op) {
    static const std::map<std::string, void (Runner::*)()> table{
        {"reeb_distribution", &Runner::op_reeb_distribution},
        {"engel_data", &Runner::op_engel_data},
        {"jacobi_identities", &Runner::op_jacobi_identities},
        {"contact_reeb", &Runner::op_contact_reeb},
        {"totally_geodesic", &Runner::op_totally_geodesic},
        {"geodesic_bracket_shape", &Runner::op_geodesic_bracket_shape},
        {"geodesic_dbeta2", &Runner::op_geodesic_dbeta2},
        {"dbeta2", &Runner::op_dbeta2},
        {"kengel_invariants", &Runner::op_kengel_invariants},
        {"kengel_check", &Runner::op_kengel_check},
        {"kengel_framing", &Runner::op_kengel_framing},
        {"boothby_wang", &Runner::op_boothby_wang},
        {"filling_check", &Runner::op_filling_check},
        {"t2_bundle", &Runner::op_t2_bundle},
        {"torus_family", &Runner::op_torus_family},
        {"jacobi_check", &Runner::op_jacobi_check},
        {"framing_search", &Runner::op_framing_search},
        {"framing_export", &Runner::op_framing_export},
    };
    (this->*table.at(op))();
  }

  void op_reeb_distribution() {
    DiffForm alpha = form("alpha"), beta = form("beta");
    Sampler s = sampler(alpha.space());
    ReebPair p = reeb_distribution(alpha, beta, s);
    DiffForm dbeta = exterior_derivative(beta);
    Expr one = Expr::integer(1);
    verdict("i_T(alpha^dbeta)", form_zero(interior_product(p.T, wedge(alpha, dbeta)), s));
    verdict("beta(T) - 1", scalar_zero(pairing(beta, p.T) - one, s));
    verdict("alpha(T)", scalar_zero(pairing(alpha, p.T), s));
    verdict("i_R(beta^dbeta)", form_zero(interior_product(p.R, wedge(beta, dbeta)), s));
    verdict("beta(R)", scalar_zero(pairing(beta, p.R), s));
    verdict("alpha(R) - 1", scalar_zero(pairing(alpha, p.R) - one, s));
    publish("T", p.T);
    publish("R", p.R);
  }

  void op_engel_data() {
    bool forms = task_->arg("alpha") || task_->arg("beta");
    bool frame = task_->arg("W") || task_->arg("X");
    EngelData d;
    if (forms) {
      DiffForm alpha = form("alpha"), beta = form("beta");
      Sampler s = sampler(alpha.space());
      EngelFormVerdicts given = check_engel_forms(alpha, beta, s);
      if (!given.holds()) {
        add_engel_verdicts(given);
        return;
      }
      d = frame ? make_engel_data(alpha, beta, field("W"), field("X"), s) : make_engel_data(alpha, beta, s);
    } else if (frame) {
      VectorField w = field("W");
      d = construct_forms_from_framing(w, field("X"), sampler(w.space()));
    } else {
      throw ManifestError("engel_data needs alpha and beta, or W and X", task_->line);
    }
    Sampler s = sampler(d.space);
    if (flag("adapt")) d = adapt(d, s);
    add_engel_verdicts(check_engel_forms(d.alpha, d.beta, s));
    publish_main(d);
    publish_data(d);
  }

  void add_engel_verdicts(const EngelFormVerdicts& v) {
    verdict("alpha^dalpha", v.even_contact);
    verdict("alpha^beta^dbeta", v.transverse);
    verdict("alpha^dalpha^beta", v.flag);
  }

  void op_jacobi_identities() {
    EngelData d = data("data");
    TableReport t = bracket_table(d, sampler(d.space));
    verdicts(t.identities);
    for (FramePair p : kFramePairs)
      for (FrameSlot slot : {FrameSlot::W, FrameSlot::X, FrameSlot::T, FrameSlot::R})
        if (!t.table(p, slot).is_zero_literal()) publish(coefficient_name(p, slot), Scalar{d.space, t.table(p, slot)});
  }

  void op_contact_reeb() {
    EngelData d = data("data");
    Sampler s = sampler(d.space);
    Contactization c = contactize(d, s);
    Sampler fs = fiber_sampler(c, s);
    ContactReebReport r = reeb_of_contactization(c, fs);
    verdict("eta^deta^2", c.contact);
    verdict("deta^2 expansion", c.expansion);
    verdict("eta|s=0 - beta", c.restriction);
    verdict("formula - solved", r.agreement);
    verdict("eta(formula) - 1", r.normalized);
    verdict("i_formula deta", r.kernel);
    passed_ = c.contact.holds && c.expansion.holds() && c.restriction.holds() && r.holds();
    publish("eta", c.eta);
    publish("formula", r.formula);
    publish("solved", r.solved);
    publish("c_TR", Scalar{d.space, r.c_tr});
  }

  void op_totally_geodesic() {
    EngelData d = data("data");
    const std::string& which = arg("distribution");
    if (which != "D" && which != "R") throw ManifestError("distribution must be D or R", task_->line);
    verdicts(totally_geodesic_check(metric("metric"), d, which == "D" ? Distribution::D : Distribution::R,
                                    sampler(d.space)));
  }

  void op_geodesic_bracket_shape() {
    EngelData d = data("data");
    verdicts(geodesic_bracket_shape(d, sampler(d.space)));
  }

  void add_dbeta2(const Dbeta2Report& r, const Space& space) {
    verdict("a_WR + b_XR", r.criterion);
    if (r.dbeta2) verdict("d(mu beta)^2", *r.dbeta2);
    if (r.mu) publish("mu", Scalar{space, *r.mu});
  }

  void op_geodesic_dbeta2() {
    EngelData d = data("data");
    GeodesicDbeta2Report r = geodesic_dbeta2_pipeline(metric("metric"), d, sampler(d.space));
    verdicts(r.geodesic);
    add_dbeta2(r.dbeta2, d.space);
    passed_ = r.holds() && all_hold(r.geodesic);
  }

  void op_dbeta2() {
    EngelData d = data("data");
    Dbeta2Report r = dbeta2_criterion(d, sampler(d.space));
    add_dbeta2(r, d.space);
    passed_ = r.holds();
  }

  void op_kengel_invariants() {
    EngelData d = data("data");
    verdicts(kengel_invariants(d, field("Z"), sampler(d.space)));
  }

  void op_kengel_check() {
    EngelData d = data("data");
    KEngelCheck c = kengel_check(d, metric("metric"), field("Z"), sampler(d.space));
    verdicts(c.engel_field);
    verdicts(c.killing);
    verdicts(c.orthogonal);
  }

  void op_kengel_framing() {
    EngelData d = data("data");
    KEngelFraming f = kengel_framing(d, metric("metric"), field("Z"), sampler(d.space));
    verdicts(f.invariants);
    publish_kdata(f.kdata);
  }

  void op_boothby_wang() {
    DiffForm lambda = form("lambda");
    BoothbyWangReport r = boothby_wang(lambda, field("L"), form("primitive"), sampler(lambda.space()));
    verdict("lambda^dlambda", r.contact);
    verdict("lambda(L)", r.legendrian);
    verdict("d omega", r.closed);
    verdict("d primitive - omega", r.primitive);
    add_engel_verdicts(r.engel);
    verdicts(r.kengel_forms);
    verdict("R - d/d" + r.fibre, r.reeb_is_fibre);
    verdicts(r.invariance);
    publish_kdata(r.kdata);
    publish("fibre", r.fibre);
  }

  void op_filling_check() {
    const Object& o = lookup(arg("kdata"));
    const auto* k = std::get_if<KEngelData>(&o);
    if (!k) throw ManifestError("'" + arg("kdata") + "' is not K-Engel data", task_->line);
    FillingReport r = filling_check(*k, sampler(k->data.space));
    std::string factor = r.lie_factor.get_str();
    verdict("eta^deta^2", r.contact);
    verdict("eta|r=1 - (beta + alpha)", r.boundary);
    verdict("L_L eta|r=1 - " + factor + " alpha", r.lie);
    verdict("alpha_M^beta_M - " + factor + " alpha^beta", r.same_distribution);
    verdict("alpha_M^dalpha_M", r.even_contact);
    verdict("alpha_M^beta_M^dalpha_M", r.flag);
    verdict("L_L(eta^deta^2)|r=1", r.volume);
    publish("radial", r.radial);
    publish("lie_factor", factor);
  }

  Expr scalar(const std::string& key) const {
    if (!m_.space) throw ManifestError("needs a [space] section", task_->line);
    SymbolTable symbols = m_.space->symbols();
    symbols.substitutions = m_.bindings;
    try {
      return parse(arg(key), symbols);
    } catch (const Error& e) {
      throw ManifestError(key + ": " + e.what(), task_->line);
    }
  }

  long whole(const std::string& key) const {
    auto q = as_rational(normalize(scalar(key)));
    if (!q || q->get_den() != 1 || !q->get_num().fits_slong_p())
      throw ManifestError("'" + key + "' must be an integer", task_->line);
    return q->get_num().get_si();
  }

  void op_t2_bundle() {
    T2BundleInput in;
    in.sigma = m_.space;
    in.f = scalar("f");
    in.g = scalar("g");
    in.alpha0 = form("alpha0");
    in.beta0 = form("beta0");
    in.area_primitive = form("primitive");
    in.n1 = whole("n1");
    in.n2 = whole("n2");
    auto eps = as_rational(normalize(scalar("epsilon")));
    if (!eps) throw ManifestError("'epsilon' must be rational", task_->line);
    in.epsilon = *eps;
    T2BundleReport r = t2_bundle_condition(in, sampler(in.sigma));
    verdict("df or (f N + n2) Omega + d alpha0", r.first);
    verdict("N g^2 Omega + g d beta0 + beta0^dg", r.second);
    verdict("g ((f N + n2) Omega + d alpha0) + beta0^df", r.third);
    verdict("N g Omega + g d alpha0 + beta0^df", r.third_constant_f);
    if (r.engel) add_engel_verdicts(*r.engel);
    verdicts(r.kengel_forms);
    if (r.reeb) verdict("R - (eps d/du1 + d/du2)", *r.reeb);
    passed_ = r.holds();
    if (r.data) {
      publish_main(*r.data);
      publish_data(*r.data);
    }
  }

  void op_torus_family() {
    LatticeSpec spec;
    if (const std::string* g = task_->arg("generators")) {
      std::string text = *g;
      std::replace(text.begin(), text.end(), ',', ' ');
      for (const auto& item : detail::split_words(text)) {
        auto colon = item.find(':');
        if (colon == std::string::npos) throw ManifestError("generators are NAME:RADICAND", task_->line);
        try {
          spec.generators.emplace_back(item.substr(0, colon), std::stol(item.substr(colon + 1)));
        } catch (const std::exception&) {
          throw ManifestError("bad radicand in '" + item + "'", task_->line);
        }
      }
    }
    for (std::size_t i = 0; i < 4; ++i) {
      std::string row = arg("v" + std::to_string(i + 1));
      std::vector<std::string> entries;
      std::stringstream in(row);
      for (std::string e; std::getline(in, e, ',');) entries.push_back(e);
      if (entries.size() != 4) throw ManifestError("v" + std::to_string(i + 1) + " needs four entries", task_->line);
      for (std::size_t j = 0; j < 4; ++j) {
        try {
          spec.vectors[i][j] = parse_surd(entries[j], spec.generators);
        } catch (const Error& e) {
          throw ManifestError(e.what(), task_->line);
        }
      }
    }
    TorusFamily fam = torus_family(spec, result_->policy);
    verdicts(kengel_invariants(fam.kdata.data, fam.kdata.Z, sampler(fam.kdata.data.space)));
    publish_kdata(fam.kdata);
    std::string coords;
    for (const auto& c : fam.z_coordinates) coords += (coords.empty() ? "" : ", ") + to_string(c);
    publish("z_coordinates", "(" + coords + ")");
  }

  LieAlgebra4 algebra() const {
    const Space& sp = m_.space;
    if (!sp || sp->dim() != 4) throw ManifestError("needs a [space] of four lie directions", task_->line);
    LieAlgebra4 l;
    for (int i = 0; i < 4; ++i) {
      if (!sp->is_lie(i)) throw ManifestError("needs a [space] of four lie directions", task_->line);
      l.generators[static_cast<std::size_t>(i)] = sp->direction(i).name;
    }
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) l.structure[i][j][k] = sp->structure(i, j, k);
    return l;
  }

  LieVector lie_vector(const VectorField& v) const {
    LieVector out;
    for (int i = 0; i < 4; ++i) {
      auto q = as_rational(v[i]);
      if (!q) throw Error("field " + to_string(v) + " is not left-invariant");
      out[static_cast<std::size_t>(i)] = *q;
    }
    return out;
  }

  VectorField as_field(const LieVector& v) const {
    std::vector<Expr> comps;
    for (const auto& q : v) comps.push_back(Expr::rational(q));
    return VectorField(m_.space, comps);
  }

  void op_jacobi_check() {
    JacobiReport r = jacobi_check(algebra());
    ZeroVerdict v;
    v.kind = r.holds() ? ZeroKind::ExactZero : ZeroKind::Nonzero;
    v.max_abs = static_cast<double>(r.violations.size());
    verdict("jacobi", v);
    std::string list;
    const LieAlgebra4 l = algebra();
    for (const auto& t : r.violations) {
      if (!list.empty()) list += " ";
      list += "(" + l.generators[t[0]] + "," + l.generators[t[1]] + (t[2] >= 0 ? "," + l.generators[t[2]] : "") + ")";
    }
    if (!list.empty()) publish("violations", list);
  }

  void op_framing_search() {
    LieAlgebra4 l = algebra();
    FramingSearch f = kengel_framing_search(l, lie_vector(field("W")), lie_vector(field("X")));
    for (std::size_t i = 0; i < f.transversality.size(); ++i) {
      NonvanishingVerdict v;
      v.holds = f.transversality[i] != 0;
      v.min_abs = std::abs(f.transversality[i].get_d());
      verdict("det(W,X,Y,z" + std::to_string(i + 1) + ")", v);
    }
    passed_ = f.found();
    publish("found", yes_no(f.found()));
    publish("characteristic", yes_no(f.characteristic));
    publish("commutant_dim", std::to_string(f.commutant.size()));
    std::string basis;
    for (const auto& z : f.commutant) basis += (basis.empty() ? "" : ", ") + to_string(as_field(z));
    publish("commutant", basis.empty() ? "{0}" : "span{" + basis + "}");
    publish("Y", as_field(f.Y));
    if (f.R) publish("R", as_field(*f.R));
    publish_main(LieSearch{l, m_.space, f});
  }

  void op_framing_export() {
    const LieSearch& s = typed<LieSearch>(arg("search"), "a framing search");
    ExportedFraming e = export_framing(s.algebra, s.search);
    verdicts(e.check.engel_field);
    verdicts(e.check.killing);
    verdicts(e.check.orthogonal);
    verdicts(e.invariants);
    publish_kdata(e.kdata);
  }

  const Manifest& m_;
  RunOptions options_;
  std::map<std::string, Object> objects_;
  const ManifestTask* task_ = nullptr;
  TaskResult* result_ = nullptr;
  std::optional<bool> passed_;
};

}  // namespace

bool TaskResult::matched() const {
  return std::all_of(expectations.begin(), expectations.end(), [](const auto& e) { return e.met; });
}

int RunReport::mismatches() const {
  int n = 0;
  for (const auto& t : tasks)
    for (const auto& e : t.expectations) n += e.met ? 0 : 1;
  return n;
}

int RunReport::exit_code() const {
  if (!fatal.empty()) return 2;
  return mismatches() > 0 ? 1 : 0;
}

RunReport run_manifest(const Manifest& m, const RunOptions& options) {
  RunReport report;
  report.manifest = m.name;
  report.source = m.source;
  Runner runner(m, options);
  for (const auto& task : m.tasks) {
    try {
      report.tasks.push_back(runner.run(task));
    } catch (const ManifestError& e) {
      report.fatal = e.what();
      break;
    }
  }
  return report;
}

RunReport parse_error_report(const std::string& source, const std::string& message) {
  RunReport r;
  r.source = source;
  r.fatal = message;
  return r;
}

std::string human_report(const RunReport& r) {
  std::ostringstream out;
  out << "manifest " << (r.manifest.empty() ? "?" : r.manifest) << " (" << r.source << ")\n";
  for (const auto& t : r.tasks) {
    out << "\n[" << t.name << "] " << t.op << "  seed " << t.policy.seed << ", " << t.policy.samples
        << " samples, tol " << format_double(t.policy.abs_tol, 6) << ", " << format_double(t.seconds, 3) << " s\n";
    if (!t.error.empty()) out << "  error: " << t.error << "\n";
    for (const auto& v : t.verdicts) {
      char line[256];
      std::snprintf(line, sizeof line, "  %-4s %-34s %-12s %s", v.holds ? "ok" : "FAIL", v.name.c_str(),
                    v.kind.c_str(), format_double(v.value, 6).c_str());
      out << line;
      if (v.witness) out << "  at " << format_witness(*v.witness, 6);
      out << "\n";
    }
    for (const auto& [k, v] : t.objects) out << "  " << k << " = " << v << "\n";
    if (t.error.empty()) out << "  outcome: " << (t.passed ? "pass" : "fail") << "\n";
    for (const auto& e : t.expectations) {
      out << "  expect " << e.text << ": " << (e.met ? "met" : "MISMATCH");
      if (!e.met && !e.detail.empty()) out << " (" << e.detail << ")";
      out << "\n";
    }
  }
  if (!r.fatal.empty()) out << "\nerror: " << r.fatal << "\n";
  out << "\n" << r.tasks.size() << " tasks, " << r.mismatches() << " mismatches, exit " << r.exit_code() << "\n";
  return out.str();
}

std::string machine_report(const RunReport& r) {
  std::ostringstream out;
  out << "engelkit-report = 1\n";
  out << "manifest = " << r.manifest << "\n";
  out << "tasks = " << r.tasks.size() << "\n";
  for (const auto& t : r.tasks) {
    std::string p = "task." + t.name + ".";
    out << p << "op = " << t.op << "\n";
    out << p << "seed = " << t.policy.seed << "\n";
    out << p << "samples = " << t.policy.samples << "\n";
    out << p << "tol = " << format_double(t.policy.abs_tol, 17) << "\n";
    out << p << "reduce_trig = " << (t.policy.reduce_trig ? "true" : "false") << "\n";
    out << p << "status = " << (t.error.empty() ? "ok" : "error") << "\n";
    if (!t.error.empty()) out << p << "error = " << t.error << "\n";
    else out << p << "outcome = " << (t.passed ? "pass" : "fail") << "\n";
    out << p << "verdicts = " << t.verdicts.size() << "\n";
    for (std::size_t i = 0; i < t.verdicts.size(); ++i) {
      const auto& v = t.verdicts[i];
      std::string q = p + "verdict." + std::to_string(i) + ".";
      out << q << "name = " << v.name << "\n";
      out << q << "kind = " << v.kind << "\n";
      out << q << "value = " << format_double(v.value, 17) << "\n";
      if (v.witness) out << q << "witness = " << format_witness(*v.witness, 17) << "\n";
    }
    for (const auto& [k, v] : t.objects) out << p << "object." << k << " = " << v << "\n";
    for (std::size_t i = 0; i < t.expectations.size(); ++i) {
      const auto& e = t.expectations[i];
      std::string q = p + "expect." + std::to_string(i);
      out << q << " = " << e.text << "\n";
      out << q << ".result = " << (e.met ? "match" : "mismatch") << "\n";
      if (!e.met && !e.detail.empty()) out << q << ".detail = " << e.detail << "\n";
    }
  }
  if (!r.fatal.empty()) out << "error = " << r.fatal << "\n";
  out << "mismatches = " << r.mismatches() << "\n";
  out << "exit = " << r.exit_code() << "\n";
  return out.str();
}

}  // namespace engelkit
