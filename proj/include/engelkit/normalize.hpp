#pragma once

#include <optional>

#include "engelkit/expr.hpp"

namespace engelkit {

// Canonical polynomial-in-atoms form: flattening, rational folding, like-term
// cancellation, zero/one absorption. Atoms are coordinates, named constants,
// elementary functions of normalized arguments and inverses of primitive sums.
// No trigonometric identities are applied.
Expr normalize(const Expr& e);

// normalize() plus the rewrite sin(u)^2 -> 1 - cos(u)^2, applied everywhere.
Expr reduce_trig(const Expr& e);

// Value of a normalized expression when it is a rational literal.
std::optional<Rational> as_rational(const Expr& e);

bool mentions_coordinates(const Expr& e);

}  // namespace engelkit
