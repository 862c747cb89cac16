// Small spaces and forms shared by the unit tests.
#pragma once

#include <string>

#include "engelkit/frame.hpp"
#include "engelkit/parse.hpp"

namespace fixture {

using namespace engelkit;

inline Space torus_chart() {
  return FrameSpace::Builder()
      .coordinate("t", {0, 1, true})
      .coordinate("x", {0, 1, true})
      .coordinate("y", {0, 1, true})
      .coordinate("z", {0, 1, true})
      .build();
}

inline Space nil4() {
  return FrameSpace::Builder()
      .lie("A", "a")
      .lie("B", "b")
      .lie("C", "c")
      .lie("D", "d")
      .bracket("D", "A", {{"B", 1}})
      .bracket("D", "B", {{"C", 1}})
      .build();
}

inline Expr scalar(const Space& s, const std::string& text) { return parse(text, s->symbols()); }

// Field from per-direction strings, in frame order.
inline VectorField field(const Space& s, const std::vector<std::string>& comps) {
  std::vector<Expr> c;
  for (const auto& t : comps) c.push_back(scalar(s, t));
  return VectorField(s, c);
}

// 1-form from per-coframe strings, in frame order.
inline DiffForm one_form(const Space& s, const std::vector<std::string>& comps) {
  std::vector<std::pair<DiffForm::Mask, Expr>> terms;
  for (std::size_t i = 0; i < comps.size(); ++i)
    terms.emplace_back(DiffForm::Mask{1} << i, scalar(s, comps[i]));
  return DiffForm::from_terms(s, 1, terms);
}

struct Torus {
  Space space = torus_chart();
  // frame order t, x, y, z
  DiffForm alpha = one_form(space, {"0", "-cos(2*pi*t)", "-sin(2*pi*t)", "1"});
  DiffForm beta = one_form(space, {"0", "-sin(2*pi*t)", "cos(2*pi*t)", "0"});
  VectorField W = field(space, {"0", "cos(2*pi*t)", "sin(2*pi*t)", "1"});
  VectorField X = field(space, {"1", "0", "0", "0"});
  VectorField T = field(space, {"0", "-sin(2*pi*t)", "cos(2*pi*t)", "0"});
  VectorField R = field(space, {"0", "0", "0", "1"});
};

// Nil4 with alpha = c, beta = -b.
struct Nil4 {
  Space space = nil4();
  DiffForm alpha = one_form(space, {"0", "0", "1", "0"});
  DiffForm beta = one_form(space, {"0", "-1", "0", "0"});
  VectorField A = VectorField::basis(space, 0);
  VectorField B = VectorField::basis(space, 1);
  VectorField C = VectorField::basis(space, 2);
  VectorField D = VectorField::basis(space, 3);
};

// Unit circle bundle over a surface of curvature k, times a circle with
// coordinate t: [A,B] = C, [B,C] = kA, [C,A] = kB.
inline Space circle_bundle(int k) {
  return FrameSpace::Builder()
      .lie("A", "a")
      .lie("B", "b")
      .lie("C", "c")
      .coordinate("t", {0, 2 * 3.141592653589793, true})
      .bracket("A", "B", {{"C", 1}})
      .bracket("B", "C", {{"A", k}})
      .bracket("C", "A", {{"B", k}})
      .build();
}

inline SamplingPolicy trig_policy() {
  SamplingPolicy p;
  p.reduce_trig = true;
  return p;
}

// Lorentz prolongation with its forms and framing.
struct Lorentz {
  explicit Lorentz(int k)
      : space(circle_bundle(k)),
        alpha(one_form(space, {"cos(t)", "sin(t)", "1", "0"})),
        beta(one_form(space, {"-sin(t)", "cos(t)", "0", "0"})),
        W(field(space, {"cos(t)", "sin(t)", "-1", std::to_string(k + 1)})),
        X(field(space, {"0", "0", "0", "1"})),
        T(field(space, {"-sin(t)", "cos(t)", "0", "0"})),
        R(field(space, {"0", "0", "1", std::to_string(-k)})) {}
  Space space;
  DiffForm alpha, beta;
  VectorField W, X, T, R;
};

// Cartan prolongation: W = d/dt, X = cos t A + sin t B.
struct Cartan {
  explicit Cartan(int k)
      : space(circle_bundle(k)),
        W(field(space, {"0", "0", "0", "1"})),
        X(field(space, {"cos(t)", "sin(t)", "0", "0"})) {}
  Space space;
  VectorField W, X;
};

}  // namespace fixture
