#pragma once

#include <string>
#include <vector>

#include "engelkit/engel.hpp"
#include "engelkit/linalg.hpp"

namespace engelkit {

// Symmetric bilinear form with components in the basis directions of the space.
struct Metric {
  Space space;
  Matrix g;
  Expr operator()(const VectorField& u, const VectorField& v) const;
};

// Components given directly in the basis directions; must be symmetric.
Metric basis_metric(const Space& space, const Matrix& g);
// Gram matrix `gram` prescribed on the frame `fields`.
Metric frame_metric(const std::vector<VectorField>& fields, const Matrix& gram, const Sampler& s);
// Makes `fields` orthonormal.
Metric orthonormal(const std::vector<VectorField>& fields, const Sampler& s);

// Leading principal minors positive at every sample; min_abs is the smallest
// minor value found.
NonvanishingVerdict positive_definite(const Metric& g, const Sampler& s);

// The field V with i_V g = theta. Throws DegenerateFrameError when g is not
// positive definite on the samples.
VectorField metric_dual(const Metric& g, const DiffForm& theta, const Sampler& s);

// Duals A of alpha and B of beta, and A = g(A,B) T + |A|^2 R,
// B = |B|^2 T + g(A,B) R.
struct MetricDualReport {
  VectorField A;
  VectorField B;
  ZeroVerdict a_combination;
  ZeroVerdict b_combination;
  bool holds() const { return a_combination.holds() && b_combination.holds(); }
};
MetricDualReport metric_duals(const Metric& g, const EngelData& data, const Sampler& s);

bool all_hold(const std::vector<NamedVerdict>& vs);

// g(W,T), g(W,R), g(X,T), g(X,R).
std::vector<NamedVerdict> orthogonality_check(const Metric& g, const EngelData& data, const Sampler& s);

// L_V(g(U,U')) + g([U',V],U) + g([U,V],U').
Expr second_fundamental_expr(const Metric& g, const VectorField& u, const VectorField& u2,
                             const VectorField& v);

enum class Distribution { D, R };

// The expression over U, U' in the generating pair of one distribution and V
// in the generating pair of the other: {W,X} x {T,R} or {T,R} x {W,X}, eight
// ordered entries named "h(U,U';V)". Throws PreconditionError when
// D and R are not orthogonal.
std::vector<NamedVerdict> totally_geodesic_check(const Metric& g, const EngelData& data,
                                                 Distribution which, const Sampler& s);

// Bracket components that vanish for a totally geodesic D with orthonormal
// {W, X}: [W,T] = b_WT X, [W,R] = b_WR X + d_WR R, [X,T] = -b_WT W + d_XT R,
// [X,R] = -b_WR W + d_XR R.
std::vector<NamedVerdict> geodesic_bracket_shape(const EngelData& data, const Sampler& s);

// (L_Z g)(e_i, e_j) for i <= j over the basis directions, named "L_Z g(e_i,e_j)".
std::vector<NamedVerdict> killing_check(const Metric& g, const VectorField& Z, const Sampler& s);

struct GeodesicDbeta2Report {
  std::vector<NamedVerdict> geodesic;
  ZeroVerdict criterion;  // a_WR + b_XR
  Dbeta2Report dbeta2;
  bool holds() const { return criterion.holds() && dbeta2.holds(); }
};
// Throws PreconditionError when D is not totally geodesic.
GeodesicDbeta2Report geodesic_dbeta2_pipeline(const Metric& g, const EngelData& data, const Sampler& s);

}  // namespace engelkit
