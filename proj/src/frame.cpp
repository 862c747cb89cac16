#include "engelkit/frame.hpp"

#include <algorithm>
#include <bit>

#include "engelkit/error.hpp"
#include "engelkit/normalize.hpp"

namespace engelkit {

int popcount(DiffForm::Mask m) { return std::popcount(m); }

// ---------------------------------------------------------------- space

FrameSpace::Builder& FrameSpace::Builder::coordinate(std::string name, Interval interval,
                                                     std::string coframe) {
  if (coframe.empty()) coframe = "d" + name;
  Direction d{name, coframe, static_cast<int>(coordinates_.size())};
  coordinates_.push_back({std::move(name), interval});
  directions_.push_back(std::move(d));
  return *this;
}

FrameSpace::Builder& FrameSpace::Builder::lie(std::string name, std::string coframe) {
  directions_.push_back({std::move(name), std::move(coframe), -1});
  return *this;
}

FrameSpace::Builder& FrameSpace::Builder::bracket(
    const std::string& a, const std::string& b,
    const std::vector<std::pair<std::string, Rational>>& value) {
  brackets_.emplace_back(a, b, value);
  return *this;
}

FrameSpace::Builder& FrameSpace::Builder::parameter(std::string name, double value) {
  parameters_.emplace_back(std::move(name), value);
  return *this;
}

Space FrameSpace::Builder::build() const {
  auto space = std::shared_ptr<FrameSpace>(new FrameSpace());
  space->coordinates_ = coordinates_;
  space->directions_ = directions_;
  for (const auto& [k, v] : parameters_) space->parameters_[k] = v;
  int n = space->dim();
  if (n == 0 || n > 31) throw Error("frame dimension must be between 1 and 31");
  std::vector<std::string> seen;
  for (const auto& d : directions_) {
    for (const auto& token : {d.name, d.coframe}) {
      if (std::find(seen.begin(), seen.end(), token) != seen.end())
        throw Error("duplicate frame name '" + token + "'");
      seen.push_back(token);
    }
  }
  space->structure_.assign(static_cast<std::size_t>(n * n * n), Rational(0));
  auto at = [&](int i, int j, int k) -> Rational& {
    return space->structure_[static_cast<std::size_t>((i * n + j) * n + k)];
  };
  for (const auto& [a, b, value] : brackets_) {
    int i = space->index_of(a);
    int j = space->index_of(b);
    if (!space->is_lie(i) || !space->is_lie(j))
      throw Error("brackets may only be declared between Lie directions: [" + a + ", " + b + "]");
    if (i == j) throw Error("bracket of a direction with itself must vanish: " + a);
    for (const auto& [target, coefficient] : value) {
      int k = space->index_of(target);
      if (!space->is_lie(k)) throw Error("bracket value must be a Lie direction: " + target);
      at(i, j, k) += coefficient;
      at(j, i, k) -= coefficient;
    }
  }
  // Jacobi: [[ei,ej],ek] + [[ej,ek],ei] + [[ek,ei],ej] = 0
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        for (int m = 0; m < n; ++m) {
          Rational total(0);
          for (int l = 0; l < n; ++l)
            total += at(i, j, l) * at(l, k, m) + at(j, k, l) * at(l, i, m) +
                     at(k, i, l) * at(l, j, m);
          if (total != 0)
            throw Error("Jacobi identity fails for (" + directions_[i].name + ", " +
                        directions_[j].name + ", " + directions_[k].name + ")");
        }
  return space;
}

bool FrameSpace::has_lie_directions() const {
  return std::any_of(directions_.begin(), directions_.end(),
                     [](const Direction& d) { return d.coordinate < 0; });
}

const Rational& FrameSpace::structure(int i, int j, int k) const {
  int n = dim();
  return structure_.at(static_cast<std::size_t>((i * n + j) * n + k));
}

int FrameSpace::index_of(std::string_view name) const {
  for (int i = 0; i < dim(); ++i)
    if (directions_[static_cast<std::size_t>(i)].name == name) return i;
  throw Error("unknown frame direction '" + std::string(name) + "'");
}

int FrameSpace::coframe_index_of(std::string_view name) const {
  for (int i = 0; i < dim(); ++i)
    if (directions_[static_cast<std::size_t>(i)].coframe == name) return i;
  throw Error("unknown coframe '" + std::string(name) + "'");
}

int FrameSpace::direction_of_coordinate(std::string_view coordinate) const {
  for (int i = 0; i < dim(); ++i) {
    const auto& d = directions_[static_cast<std::size_t>(i)];
    if (d.coordinate >= 0 && coordinates_[static_cast<std::size_t>(d.coordinate)].name == coordinate)
      return i;
  }
  return -1;
}

Domain FrameSpace::domain() const {
  Domain d;
  for (const auto& c : coordinates_) d.coordinates.emplace_back(c.name, c.interval);
  d.parameters = parameters_;
  return d;
}

SymbolTable FrameSpace::symbols() const {
  SymbolTable s;
  for (const auto& c : coordinates_) s.coordinates.push_back(c.name);
  for (const auto& [k, v] : parameters_) s.parameters.push_back(k);
  return s;
}

Space FrameSpace::with_coordinate(CoordinateSpec c, std::string coframe) const {
  Builder b;
  for (const auto& d : directions_) {
    if (d.coordinate >= 0) {
      b.coordinate(d.name, coordinates_[static_cast<std::size_t>(d.coordinate)].interval, d.coframe);
    } else {
      b.lie(d.name, d.coframe);
    }
  }
  b.coordinate(c.name, c.interval, std::move(coframe));
  for (const auto& [k, v] : parameters_) b.parameter(k, v);
  int n = dim();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      std::vector<std::pair<std::string, Rational>> value;
      for (int k = 0; k < n; ++k)
        if (structure(i, j, k) != 0) value.emplace_back(directions_[k].name, structure(i, j, k));
      if (!value.empty()) b.bracket(directions_[i].name, directions_[j].name, value);
    }
  return b.build();
}

Sampler make_sampler(const Space& space, const SamplingPolicy& policy) {
  return Sampler(space->domain(), policy);
}

// ---------------------------------------------------------------- fields

VectorField::VectorField(Space space, std::vector<Expr> components)
    : space_(std::move(space)), components_(std::move(components)) {
  if (static_cast<int>(components_.size()) != space_->dim())
    throw Error("vector field needs " + std::to_string(space_->dim()) + " components");
  for (auto& c : components_) c = normalize(c);
}

VectorField VectorField::zero(Space space) {
  int n = space->dim();
  return VectorField(std::move(space), std::vector<Expr>(static_cast<std::size_t>(n)));
}

VectorField VectorField::basis(Space space, int i) {
  std::vector<Expr> c(static_cast<std::size_t>(space->dim()));
  c.at(static_cast<std::size_t>(i)) = Expr::integer(1);
  return VectorField(std::move(space), std::move(c));
}

namespace {

void same_space(const Space& a, const Space& b) {
  if (a.get() != b.get()) throw Error("operands live on different frame spaces");
}

// Collects raw terms per key and normalizes each sum once.
template <typename Key>
class Accumulator {
 public:
  void add(const Key& k, Expr e) {
    if (!e.is_zero_literal()) terms_[k].push_back(std::move(e));
  }
  std::map<Key, Expr> finish() const {
    std::map<Key, Expr> out;
    for (const auto& [k, v] : terms_) {
      Expr s = normalize(Expr::sum(v));
      if (!s.is_zero_literal()) out.emplace(k, std::move(s));
    }
    return out;
  }

 private:
  std::map<Key, std::vector<Expr>> terms_;
};

}  // namespace

Expr apply(const VectorField& x, const Expr& f) {
  const Space& s = x.space();
  std::vector<Expr> terms;
  for (int i = 0; i < s->dim(); ++i) {
    const auto& d = s->direction(i);
    if (d.coordinate < 0 || x[i].is_zero_literal()) continue;
    Expr df = differentiate(f, s->coordinates()[static_cast<std::size_t>(d.coordinate)].name);
    if (!df.is_zero_literal()) terms.push_back(x[i] * df);
  }
  return normalize(Expr::sum(std::move(terms)));
}

VectorField bracket(const VectorField& x, const VectorField& y) {
  same_space(x.space(), y.space());
  const Space& s = x.space();
  int n = s->dim();
  std::vector<Expr> out;
  for (int k = 0; k < n; ++k) {
    std::vector<Expr> terms{apply(x, y[k]), -apply(y, x[k])};
    for (int i = 0; i < n; ++i) {
      if (x[i].is_zero_literal()) continue;
      for (int j = 0; j < n; ++j) {
        const Rational& c = s->structure(i, j, k);
        if (c == 0 || y[j].is_zero_literal()) continue;
        terms.push_back(Expr::rational(c) * x[i] * y[j]);
      }
    }
    out.push_back(Expr::sum(std::move(terms)));
  }
  return VectorField(s, std::move(out));
}

VectorField operator+(const VectorField& a, const VectorField& b) {
  same_space(a.space(), b.space());
  std::vector<Expr> c;
  for (int i = 0; i < a.space()->dim(); ++i) c.push_back(a[i] + b[i]);
  return VectorField(a.space(), std::move(c));
}

VectorField operator-(const VectorField& a, const VectorField& b) {
  same_space(a.space(), b.space());
  std::vector<Expr> c;
  for (int i = 0; i < a.space()->dim(); ++i) c.push_back(a[i] - b[i]);
  return VectorField(a.space(), std::move(c));
}

VectorField operator*(const Expr& f, const VectorField& a) {
  std::vector<Expr> c;
  for (const auto& x : a.components()) c.push_back(f * x);
  return VectorField(a.space(), std::move(c));
}

VectorField map_components(const VectorField& v, Expr (*simplify)(const Expr&)) {
  std::vector<Expr> c;
  for (const auto& x : v.components()) c.push_back(simplify(x));
  return VectorField(v.space(), std::move(c));
}

// ---------------------------------------------------------------- forms

DiffForm::DiffForm(Space space, int degree) : space_(std::move(space)), degree_(degree) {
  if (degree < 0) throw DegreeError("form degree out of range");
}

DiffForm DiffForm::scalar(Space space, const Expr& f) {
  return from_terms(std::move(space), 0, {{0u, f}});
}

DiffForm DiffForm::basis(Space space, int i) {
  return from_terms(std::move(space), 1, {{Mask{1} << i, Expr::integer(1)}});
}

DiffForm DiffForm::from_terms(Space space, int degree,
                              const std::vector<std::pair<Mask, Expr>>& terms) {
  DiffForm w(std::move(space), degree);
  Accumulator<Mask> acc;
  for (const auto& [m, e] : terms) {
    if (popcount(m) != degree) throw DegreeError("term degree does not match form degree");
    if (m >> w.space_->dim()) throw DegreeError("coframe index out of range");
    acc.add(m, e);
  }
  w.terms_ = acc.finish();
  return w;
}

Expr DiffForm::coefficient(Mask m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Expr::integer(0) : it->second;
}

std::vector<Expr> DiffForm::coefficients() const {
  std::vector<Expr> out;
  for (const auto& [m, e] : terms_) out.push_back(e);
  return out;
}

namespace {

// Sign of e^a wedge e^b relative to the sorted basis element e^(a|b).
int wedge_sign(DiffForm::Mask a, DiffForm::Mask b) {
  int swaps = 0;
  for (DiffForm::Mask rest = b; rest; rest &= rest - 1) {
    int j = std::countr_zero(rest);
    swaps += std::popcount(a >> (j + 1));
  }
  return swaps % 2 ? -1 : 1;
}

DiffForm from_map(const Space& s, int degree, const std::map<DiffForm::Mask, Expr>& terms) {
  std::vector<std::pair<DiffForm::Mask, Expr>> v(terms.begin(), terms.end());
  return DiffForm::from_terms(s, degree, v);
}

}  // namespace

DiffForm wedge(const DiffForm& a, const DiffForm& b) {
  same_space(a.space(), b.space());
  int degree = a.degree() + b.degree();
  if (degree > a.space()->dim()) return DiffForm(a.space(), degree);
  Accumulator<DiffForm::Mask> acc;
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      if (ma & mb) continue;
      Expr prod = ca * cb;
      acc.add(ma | mb, wedge_sign(ma, mb) < 0 ? -prod : prod);
    }
  auto m = acc.finish();
  std::vector<std::pair<DiffForm::Mask, Expr>> v(m.begin(), m.end());
  return DiffForm::from_terms(a.space(), degree, v);
}

DiffForm interior_product(const VectorField& x, const DiffForm& w) {
  same_space(x.space(), w.space());
  if (w.degree() == 0) throw DegreeError("interior product of a 0-form");
  Accumulator<DiffForm::Mask> acc;
  for (const auto& [m, c] : w.terms()) {
    for (DiffForm::Mask rest = m; rest; rest &= rest - 1) {
      int j = std::countr_zero(rest);
      if (x[j].is_zero_literal()) continue;
      int below = std::popcount(m & ((DiffForm::Mask{1} << j) - 1));
      Expr term = x[j] * c;
      acc.add(m ^ (DiffForm::Mask{1} << j), below % 2 ? -term : term);
    }
  }
  return from_map(w.space(), w.degree() - 1, acc.finish());
}

DiffForm exterior_derivative(const DiffForm& w) {
  const Space& s = w.space();
  int n = s->dim();
  if (w.degree() >= n) return DiffForm(s, w.degree() + 1);
  // d(theta^k) = - sum_{i<j} c^k_ij theta^i ^ theta^j
  std::vector<std::vector<std::pair<DiffForm::Mask, Rational>>> dtheta(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (s->structure(i, j, k) != 0)
          dtheta[k].emplace_back((DiffForm::Mask{1} << i) | (DiffForm::Mask{1} << j),
                                 -s->structure(i, j, k));
  Accumulator<DiffForm::Mask> acc;
  for (const auto& [m, c] : w.terms()) {
    // df ^ theta^I
    for (int i = 0; i < n; ++i) {
      const auto& d = s->direction(i);
      DiffForm::Mask bit = DiffForm::Mask{1} << i;
      if (d.coordinate < 0 || (m & bit)) continue;
      Expr df = differentiate(c, s->coordinates()[static_cast<std::size_t>(d.coordinate)].name);
      if (df.is_zero_literal()) continue;
      acc.add(m | bit, wedge_sign(bit, m) < 0 ? -df : df);
    }
    // c * d(theta^I) with the graded Leibniz rule
    int position = 0;
    for (DiffForm::Mask rest = m; rest; rest &= rest - 1, ++position) {
      int k = std::countr_zero(rest);
      DiffForm::Mask bit = DiffForm::Mask{1} << k;
      DiffForm::Mask before = m & (bit - 1);
      DiffForm::Mask after = m & ~(bit | before);
      for (const auto& [pair, coefficient] : dtheta[static_cast<std::size_t>(k)]) {
        if ((pair & before) || (pair & after)) continue;
        // theta^before ^ pair ^ theta^after
        int sign = (position % 2 ? -1 : 1) * wedge_sign(before, pair) *
                   wedge_sign(before | pair, after);
        // the leading (-1)^position moves d past the first `position` factors
        Expr term = Expr::rational(coefficient * sign) * c;
        acc.add(before | pair | after, term);
      }
    }
  }
  return from_map(s, w.degree() + 1, acc.finish());
}

DiffForm lie_derivative(const VectorField& x, const DiffForm& w) {
  if (w.degree() == 0) return DiffForm::scalar(w.space(), apply(x, w.value()));
  DiffForm a = interior_product(x, exterior_derivative(w));
  DiffForm b = exterior_derivative(interior_product(x, w));
  return a + b;
}

Expr pairing(const DiffForm& one_form, const VectorField& v) {
  if (one_form.degree() != 1) throw DegreeError("pairing needs a 1-form");
  return interior_product(v, one_form).value();
}

Expr evaluate_on(const DiffForm& w, const std::vector<VectorField>& vs) {
  if (static_cast<int>(vs.size()) != w.degree()) throw DegreeError("wrong number of vectors");
  DiffForm cur = w;
  for (const auto& v : vs) cur = interior_product(v, cur);
  return cur.value();
}

DiffForm operator+(const DiffForm& a, const DiffForm& b) {
  same_space(a.space(), b.space());
  if (a.degree() != b.degree()) throw DegreeError("adding forms of different degree");
  std::vector<std::pair<DiffForm::Mask, Expr>> v(a.terms().begin(), a.terms().end());
  v.insert(v.end(), b.terms().begin(), b.terms().end());
  return DiffForm::from_terms(a.space(), a.degree(), v);
}

DiffForm operator-(const DiffForm& a, const DiffForm& b) { return a + Expr::integer(-1) * b; }

DiffForm operator*(const Expr& f, const DiffForm& a) {
  std::vector<std::pair<DiffForm::Mask, Expr>> v;
  for (const auto& [m, c] : a.terms()) v.emplace_back(m, f * c);
  return DiffForm::from_terms(a.space(), a.degree(), v);
}

DiffForm map_coefficients(const DiffForm& w, Expr (*simplify)(const Expr&)) {
  std::vector<std::pair<DiffForm::Mask, Expr>> v;
  for (const auto& [m, c] : w.terms()) v.emplace_back(m, simplify(c));
  return DiffForm::from_terms(w.space(), w.degree(), v);
}

ZeroVerdict zero_test(const DiffForm& w, const Sampler& s) { return s.all_zero(w.coefficients()); }
ZeroVerdict zero_test(const VectorField& v, const Sampler& s) { return s.all_zero(v.components()); }

NonvanishingVerdict nonvanishing(const DiffForm& w, const Sampler& s) {
  return s.nonvanishing_any(w.coefficients());
}
NonvanishingVerdict nonvanishing(const VectorField& v, const Sampler& s) {
  return s.nonvanishing_any(v.components());
}

// ---------------------------------------------------------------- printing

namespace {

std::string linear_combination(const std::vector<std::pair<std::string, Expr>>& terms) {
  if (terms.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [token, c] : terms) {
    bool negative = false;
    Expr mag = c;
    if (c.kind() == ExprKind::Negate) {
      negative = true;
      mag = c.arg();
    } else if (c.is_rational() && c.value() < 0) {
      negative = true;
      mag = Expr::rational(-c.value());
    }
    std::string piece;
    if (mag.is_one_literal()) {
      piece = token;
    } else {
      std::string m = to_string(mag);
      bool wrap = mag.kind() == ExprKind::Sum || mag.kind() == ExprKind::Quotient ||
                  mag.kind() == ExprKind::Negate;
      piece = (wrap ? "(" + m + ")" : m) + "*" + token;
    }
    if (first) {
      out += negative ? "-" + piece : piece;
    } else {
      out += negative ? " - " + piece : " + " + piece;
    }
    first = false;
  }
  return out;
}

}  // namespace

std::string to_string(const VectorField& v) {
  std::vector<std::pair<std::string, Expr>> terms;
  for (int i = 0; i < v.space()->dim(); ++i)
    if (!v[i].is_zero_literal()) terms.emplace_back("@" + v.space()->direction(i).name, v[i]);
  return linear_combination(terms);
}

std::string to_string(const DiffForm& w) {
  if (w.degree() == 0) return to_string(w.value());
  std::vector<std::pair<std::string, Expr>> terms;
  for (const auto& [m, c] : w.terms()) {
    std::string token;
    for (DiffForm::Mask rest = m; rest; rest &= rest - 1) {
      if (!token.empty()) token += "*";
      token += w.space()->direction(std::countr_zero(rest)).coframe;
    }
    terms.emplace_back(token, c);
  }
  return linear_combination(terms);
}

}  // namespace engelkit
