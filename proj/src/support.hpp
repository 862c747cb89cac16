// Verdict helpers shared by the geometry modules.
#pragma once

#include <algorithm>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "engelkit/frame.hpp"
#include "engelkit/linalg.hpp"
#include "engelkit/normalize.hpp"

namespace engelkit::detail {

inline ZeroVerdict scalar_zero(const Expr& e, const Sampler& s) { return s.is_zero(reduce_trig(e)); }

inline ZeroVerdict field_zero(const VectorField& v, const Sampler& s) {
  return zero_test(map_components(v, reduce_trig), s);
}

inline ZeroVerdict form_zero(const DiffForm& w, const Sampler& s) {
  return zero_test(map_coefficients(w, reduce_trig), s);
}

// Worst of several verdicts: Nonzero beats SampledZero beats ExactZero.
inline ZeroVerdict worst(std::initializer_list<ZeroVerdict> vs) {
  ZeroVerdict out;
  for (const auto& v : vs) {
    if (static_cast<int>(v.kind) > static_cast<int>(out.kind)) out = v;
    out.max_abs = std::max(out.max_abs, v.max_abs);
  }
  return out;
}

inline ZeroVerdict worst(const std::vector<ZeroVerdict>& vs) {
  ZeroVerdict out;
  for (const auto& v : vs) out = worst({out, v});
  return out;
}

inline std::optional<VectorField> try_solve(const std::vector<KernelCondition>& conditions,
                                            const Sampler& s) {
  try {
    return solve_kernel(conditions, s);
  } catch (const WitnessError&) {
    return std::nullopt;
  }
}

// `stem`, or `stem` followed by the first free integer suffix, avoiding every
// direction, coframe, coordinate and parameter name of the space.
inline std::string fresh_coordinate_name(const Space& base, const std::string& stem) {
  std::vector<std::string> taken;
  for (const auto& d : base->directions()) {
    taken.push_back(d.name);
    taken.push_back(d.coframe);
  }
  for (const auto& c : base->coordinates()) taken.push_back(c.name);
  for (const auto& [name, value] : base->parameters()) taken.push_back(name);
  auto free = [&](const std::string& n) {
    return std::find(taken.begin(), taken.end(), n) == taken.end() &&
           std::find(taken.begin(), taken.end(), "d" + n) == taken.end();
  };
  if (free(stem)) return stem;
  for (int i = 1;; ++i)
    if (free(stem + std::to_string(i))) return stem + std::to_string(i);
}

inline bool is_literal(const Expr& e, int value) {
  auto r = as_rational(normalize(e));
  return r && *r == value;
}

}  // namespace engelkit::detail
