#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "engelkit/engel.hpp"
#include "engelkit/metric.hpp"
#include "engelkit/surd.hpp"

namespace engelkit {

// Engel structure with a metric and a symmetry Z. `data` carries the K-Engel
// framing {W, X, T, R} with R = Z once built by kengel_framing. `rank` is the
// dimension of the closure of the R-orbits when a construction knows it.
struct KEngelData {
  EngelData data;
  Metric g;
  VectorField Z;
  std::optional<int> rank;
};

struct KEngelCheck {
  // det(W, X, [Z,W], T), det(W, X, [Z,W], R) and the same for X.
  std::vector<NamedVerdict> engel_field;
  std::vector<NamedVerdict> killing;
  // g(Z,W), g(Z,X), g(Z,T); {W, X, T} spans ker alpha.
  std::vector<NamedVerdict> orthogonal;
  bool holds() const { return all_hold(engel_field) && all_hold(killing) && all_hold(orthogonal); }
};
KEngelCheck kengel_check(const EngelData& data, const Metric& g, const VectorField& Z, const Sampler& s);

// "dalpha^2", "dbeta^2", "beta^dalpha".
std::vector<NamedVerdict> kengel_form_conditions(const DiffForm& alpha, const DiffForm& beta, const Sampler& s);

// Every identity of a K-Engel framing with symmetry Z: the form conditions,
// R - Z, the adapted normalization, [W,R], [X,R], [T,R], R-invariance of
// a_WX, a_WT, b_WT, a_XT, and b_WX, d_WR, b_XT + a_WT.
std::vector<NamedVerdict> kengel_invariants(const EngelData& data, const VectorField& Z, const Sampler& s);

struct KEngelFraming {
  KEngelData kdata;
  std::vector<NamedVerdict> invariants;
  bool holds() const { return all_hold(invariants); }
};

// alpha' = alpha / alpha(Z), beta' = -L_X alpha' with the X of `data`, then the
// adapted rescaling. The framing of `data` is expected to commute with Z;
// when it does not, the invariants say which bracket fails. Throws
// PreconditionError when kengel_check fails.
KEngelFraming kengel_framing(const EngelData& data, const Metric& g, const VectorField& Z, const Sampler& s);

struct ConverseMetric {
  std::vector<NamedVerdict> conditions;  // form conditions and the eigen-line test
  EngelData framing;                     // adapted, commuting with R
  Metric g;                              // makes the framing orthonormal
  KEngelCheck check;                     // with Z = R
  bool holds() const { return all_hold(conditions) && check.holds(); }
};
// Uses the X of `data`. Throws PreconditionError when a form condition fails
// or [R,X] has a W, T or R component.
ConverseMetric converse_metric(const EngelData& data, const Sampler& s);

struct RhoReport {
  std::vector<NamedVerdict> preconditions;  // "dalpha^2", "beta + L_X alpha"
  ZeroVerdict criterion;                    // L_R rho ^ beta
  ZeroVerdict table;                        // a_WR and a_XR
  DiffForm drho;
  ZeroVerdict drho_zero;
  bool holds() const { return criterion.holds(); }
};
// rho is the first element of the dual coframe. Throws PreconditionError when
// a precondition fails.
RhoReport rho_criterion(const EngelData& data, const Sampler& s);

// alpha_i = alpha / alpha(R_i), beta_i = -L_X alpha_i, with the metric from
// converse_metric and the framing from kengel_framing. Throws
// PreconditionError when R_i does not commute with the framing and
// DegenerateFrameError when alpha(R_i) vanishes at a sample.
KEngelFraming rank1_perturbation(const KEngelData& kdata, const VectorField& Ri, const Sampler& s);

struct BoothbyWangReport {
  NonvanishingVerdict contact;  // lambda ^ d lambda
  ZeroVerdict legendrian;       // lambda(L)
  ZeroVerdict closed;           // d omega
  ZeroVerdict primitive;        // d a_loc - omega
  std::string fibre;            // fibre coordinate name
  KEngelData kdata;             // rank 1, Z = R, orthonormal framing metric
  EngelFormVerdicts engel;
  std::vector<NamedVerdict> kengel_forms;
  ZeroVerdict reeb_is_fibre;             // R - d/dt
  std::vector<NamedVerdict> invariance;  // L_R alpha, L_R beta, [R,W], [R,X], [R,T]
  bool holds() const {
    return engel.holds() && all_hold(kengel_forms) && reeb_is_fibre.holds() && all_hold(invariance);
  }
};
// On N x S^1 with fibre coordinate t (renamed when taken): alpha = dt + a_loc,
// beta = lambda, omega = i_L(lambda ^ d lambda). W is the horizontal lift of L.
// Throws PreconditionError when a precondition verdict fails.
BoothbyWangReport boothby_wang(const DiffForm& lambda, const VectorField& L, const DiffForm& a_loc,
                               const Sampler& s);

// Trivializing chart of a T^2-bundle over a surface chart `sigma`, fibre
// coordinates u1, u2 and theta_i = du_i + n_i P with dP = Omega.
struct T2BundleInput {
  Space sigma;
  Expr f;
  Expr g;
  DiffForm alpha0;
  DiffForm beta0;
  DiffForm area_primitive;  // P
  long n1 = 0;
  long n2 = 0;
  Rational epsilon;
};

struct T2BundleReport {
  // df != 0 or (f N + n2) Omega + d alpha0 != 0, pointwise; N = n1 - eps n2.
  NonvanishingVerdict first;
  // N g^2 Omega + g d beta0 + beta0 ^ dg
  NonvanishingVerdict second;
  // g ((f N + n2) Omega + d alpha0) + beta0 ^ df, equivalent to beta ^ d alpha = 0
  ZeroVerdict third;
  // N g Omega + g d alpha0 + beta0 ^ df; agrees with `third` when f N + n2 = N
  ZeroVerdict third_constant_f;
  // Built when the three conditions hold: alpha = f sigma + theta2 + alpha0,
  // beta = g sigma + beta0 with sigma = theta1 - eps theta2.
  std::optional<EngelData> data;
  std::optional<EngelFormVerdicts> engel;
  std::vector<NamedVerdict> kengel_forms;
  std::optional<ZeroVerdict> reeb;  // R - (eps d/du1 + d/du2)
  bool conditions_hold() const { return first.holds && second.holds && third.holds(); }
  bool holds() const {
    return conditions_hold() && engel && engel->holds() && all_hold(kengel_forms) && reeb && reeb->holds();
  }
};
T2BundleReport t2_bundle_condition(const T2BundleInput& in, const Sampler& s);

// Lattice vectors in (x, y, z, t) order with entries in Q(sqrt p1, ...).
struct LatticeSpec {
  std::vector<std::pair<std::string, long>> generators;  // name, squarefree radicand > 1
  std::array<std::array<Surd, 4>, 4> vectors;
};

// Parses "q0 + q1*name1 + ..." linear in the declared generator names.
Surd parse_surd(std::string_view text, const std::vector<std::pair<std::string, long>>& generators);

struct TorusFamily {
  KEngelData kdata;
  std::array<Surd, 4> z_coordinates;  // d/dz in lattice coordinates
  int rank = 0;
};
// W = cos(2 pi t) d/dx + sin(2 pi t) d/dy + d/dz on the (t, x, y, z) chart with
// Z = d/dz. Throws PreconditionError for non-integral t-components, a fourth
// vector other than (0,0,0,1), or a degenerate lattice.
TorusFamily torus_family(const LatticeSpec& lattice, const SamplingPolicy& policy = {});

struct FillingReport {
  std::string radial;               // name of the r coordinate
  NonvanishingVerdict contact;      // eta ^ d eta ^ d eta on M x [1/2, 3/2]
  ZeroVerdict boundary;             // eta at r = 1 minus (beta + alpha)
  ZeroVerdict lie;                  // (L_L eta) at r = 1 minus lie_factor * alpha
  Rational lie_factor{2};
  ZeroVerdict same_distribution;    // alpha_M ^ beta_M - lie_factor alpha ^ beta
  NonvanishingVerdict even_contact; // alpha_M ^ d alpha_M
  ZeroVerdict flag;                 // alpha_M ^ beta_M ^ d alpha_M
  ZeroVerdict volume;               // L_L(eta ^ d eta ^ d eta) at r = 1
  bool holds() const {
    return contact.holds && boundary.holds() && lie.holds() && same_distribution.holds() &&
           even_contact.holds && flag.holds() && volume.holds();
  }
};
// eta = beta + r^2 alpha and L = (1/r) d/dr; alpha_M = (L_L eta)|_{r=1} and
// beta_M = eta|_{r=1}. Throws PreconditionError unless kdata.rank is 1.
FillingReport filling_check(const KEngelData& kdata, const Sampler& s);

}  // namespace engelkit
