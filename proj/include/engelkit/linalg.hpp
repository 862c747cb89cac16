#pragma once

#include <vector>

#include "engelkit/expr.hpp"
#include "engelkit/frame.hpp"
#include "engelkit/sampling.hpp"

namespace engelkit {

using Matrix = std::vector<std::vector<Expr>>;

// Exact determinant by memoized Laplace expansion; entries and minors are
// simplified with reduce_trig.
Expr determinant(const Matrix& m);

// Symbolic inverse via the adjugate. Throws DegenerateFrameError when the
// determinant vanishes at a sample (witness attached).
Matrix inverse(const Matrix& m, const Sampler& s);

// Unique solution of a (possibly overdetermined) system a x = b. A square row
// subset with a nonvanishing determinant is chosen by numeric screening at the
// samples, solved by Cramer's rule, then every row is verified. Throws
// DegenerateFrameError when no unique solution exists and
// InconsistentSystemError when a row is violated.
std::vector<Expr> solve_linear(const Matrix& a, const std::vector<Expr>& b, const Sampler& s);

// Coframe theta^i with theta^i(fields_j) = delta_ij.
std::vector<DiffForm> dual_coframe(const std::vector<VectorField>& fields, const Sampler& s);

// Components of v in the basis `fields`.
std::vector<Expr> components_in(const std::vector<VectorField>& fields, const VectorField& v,
                                const Sampler& s);

// Condition i_V form = target. For forms of degree > 1 the target must be 0.
struct KernelCondition {
  DiffForm form;
  Expr target;
};

VectorField solve_kernel(const std::vector<KernelCondition>& conditions, const Sampler& s);

}  // namespace engelkit
