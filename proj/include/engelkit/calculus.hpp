#pragma once

#include <functional>
#include <map>
#include <string>

#include "engelkit/expr.hpp"

namespace engelkit {

using Env = std::map<std::string, double, std::less<>>;

// Exact partial derivative, returned normalized.
Expr differentiate(const Expr& e, const std::string& coordinate);

// Numeric value; `pi` is built in, every other name must be bound in env.
// Throws SingularityError on division by |x| < 1e-14, ln of x <= 0 or a
// non-finite result.
double evaluate(const Expr& e, const Env& env);

// Replaces every Coord or Named node called `name`; the result is normalized.
Expr substitute(const Expr& e, const std::string& name, const Expr& replacement);

// Structural map over leaves; the result is not normalized.
Expr map_leaves(const Expr& e, const std::function<Expr(const Expr&)>& leaf);

}  // namespace engelkit
