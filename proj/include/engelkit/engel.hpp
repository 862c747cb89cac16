#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "engelkit/frame.hpp"
#include "engelkit/sampling.hpp"

namespace engelkit {

// Three defining-form conditions: alpha^dalpha and alpha^beta^dbeta nowhere
// vanishing (on the sample set), alpha^dalpha^beta identically zero.
struct EngelFormVerdicts {
  NonvanishingVerdict even_contact;  // alpha ^ d alpha
  NonvanishingVerdict transverse;    // alpha ^ beta ^ d beta
  ZeroVerdict flag;                  // alpha ^ d alpha ^ beta
  bool holds() const { return even_contact.holds && transverse.holds && flag.holds(); }
};

EngelFormVerdicts check_engel_forms(const DiffForm& alpha, const DiffForm& beta, const Sampler& s);

// Spanning field of ker(alpha ^ d alpha) inside ker alpha, scaled so that its
// first component that is nonvanishing on the samples equals 1.
VectorField characteristic_field(const DiffForm& alpha, const Sampler& s);

struct ReebPair {
  VectorField T;
  VectorField R;
};

// i_T(alpha^dbeta) = 0, beta(T) = 1, alpha(T) = 0,
// i_R(beta^dbeta) = 0, beta(R) = 0, alpha(R) = 1.
ReebPair reeb_distribution(const DiffForm& alpha, const DiffForm& beta, const Sampler& s);

// A field X in D = ker alpha ^ ker beta with {W, X, T, R} a frame. Chooses the
// first pair of frame indices (i, j) for which X^i = 1, X^j = 0 is solvable.
VectorField complete_framing(const DiffForm& alpha, const DiffForm& beta, const VectorField& W,
                             const Sampler& s);

// Defining forms, a framing {W, X} of D and the induced Reeb pair, plus the
// dual coframe {rho, tau, beta', alpha'} of {W, X, T, R}.
struct EngelData {
  Space space;
  DiffForm alpha;
  DiffForm beta;
  VectorField W;
  VectorField X;
  VectorField T;
  VectorField R;
  std::array<DiffForm, 4> coframe;
};

EngelData make_engel_data(const DiffForm& alpha, const DiffForm& beta, const VectorField& W,
                          const VectorField& X, const Sampler& s);
// W from characteristic_field, X from complete_framing.
EngelData make_engel_data(const DiffForm& alpha, const DiffForm& beta, const Sampler& s);

enum class FramePair { WX, WT, WR, XT, XR, TR };
enum class FrameSlot { W, X, T, R };
inline constexpr std::array<FramePair, 6> kFramePairs{FramePair::WX, FramePair::WT, FramePair::WR,
                                                      FramePair::XT, FramePair::XR, FramePair::TR};
std::string to_string(FramePair p);
// "a_WX", "d_TR", ...
std::string coefficient_name(FramePair p, FrameSlot slot);

// Components a, b, c, d of [A, B] in the frame {W, X, T, R}.
struct BracketTable {
  std::array<std::array<Expr, 4>, 6> entries;
  const Expr& operator()(FramePair p, FrameSlot slot) const {
    return entries[static_cast<std::size_t>(p)][static_cast<std::size_t>(slot)];
  }
  Expr& operator()(FramePair p, FrameSlot slot) {
    return entries[static_cast<std::size_t>(p)][static_cast<std::size_t>(slot)];
  }
};

const VectorField& frame_field(const EngelData& data, FrameSlot slot);
BracketTable compute_bracket_table(const EngelData& data);

struct NamedVerdict {
  std::string name;
  ZeroVerdict verdict;
};

// Vanishing coefficients c_WT, c_WR, c_XT, c_XR, d_WX, d_WT followed by the
// eight Jacobi consequences J1a .. J4b of an adapted framing, each as
// lhs - rhs. Evaluated on the supplied table, so a corrupted table shows up.
std::vector<NamedVerdict> jacobi_identities(const EngelData& data, const BracketTable& table,
                                            const Sampler& s);

struct AdaptedVerdicts {
  ZeroVerdict c_wx;  // beta([W,X]) - 1
  ZeroVerdict d_xt;  // alpha([X,T]) - 1
  bool holds() const { return c_wx.holds() && d_xt.holds(); }
};
AdaptedVerdicts adapted_check(const EngelData& data, const BracketTable& table, const Sampler& s);

struct TableReport {
  BracketTable table;
  std::vector<NamedVerdict> identities;
  bool holds() const;
};
// Throws PreconditionError when the framing is not adapted.
TableReport bracket_table(const EngelData& data, const Sampler& s);

// Rescales W by d_XT / c_WX and X by 1 / d_XT, which makes c_WX = d_XT = 1.
std::pair<VectorField, VectorField> adapted_framing(const DiffForm& alpha, const DiffForm& beta,
                                                    const VectorField& W, const VectorField& X,
                                                    const Sampler& s);
EngelData adapt(const EngelData& data, const Sampler& s);

struct IntegrabilityReport {
  Expr c_tr;                   // d beta(R, T)
  ZeroVerdict condition;       // d(c_TR alpha) ^ beta
  ZeroVerdict t_in_kernel;     // i_T(d beta + c_TR beta ^ alpha)
  ZeroVerdict r_in_kernel;     // i_R(d beta + c_TR beta ^ alpha)
  ZeroVerdict frobenius;       // [T,R] in <T,R>
};
IntegrabilityReport integrability_check(const EngelData& data, const Sampler& s);

// [T, R] in span{T, R}: det(T, R, [T,R], W) and det(T, R, [T,R], X).
ZeroVerdict frobenius_check(const EngelData& data, const Sampler& s);

// New forms lambda*alpha, mu*beta + nu*alpha with recomputed Reeb pair and
// c_TR, compared with the closed forms for the single-parameter changes.
struct TransformReport {
  DiffForm alpha;
  DiffForm beta;
  VectorField T;
  VectorField R;
  Expr c_tr;
  // Closed-form comparisons that apply to the given (lambda, mu, nu).
  std::vector<NamedVerdict> closed_forms;
  bool holds() const;
};
TransformReport transform_forms(const EngelData& data, const Expr& lambda, const Expr& mu,
                                const Expr& nu, const Sampler& s);

struct Dbeta2Report {
  ZeroVerdict criterion;  // a_WR + b_XR
  std::optional<Expr> mu;   // 1 / c_WX when the criterion holds
  std::optional<ZeroVerdict> dbeta2;  // d(mu beta) ^ d(mu beta)
  bool holds() const { return criterion.holds() && dbeta2 && dbeta2->holds(); }
};
// The framing need not be adapted.
Dbeta2Report dbeta2_criterion(const EngelData& data, const Sampler& s);

struct SymmetryReport {
  ZeroVerdict dalpha_squared;
  VectorField Z;
  ZeroVerdict kernel;     // i_Z d alpha
  ZeroVerdict normalized; // alpha(Z) - 1
  ZeroVerdict preserves;  // L_Z alpha
  bool holds() const { return dalpha_squared.holds() && kernel.holds() && normalized.holds() && preserves.holds(); }
};
// Z in ker d alpha with alpha(Z) = 1, the sparsest in the frame basis.
// Throws PreconditionError when d alpha ^ d alpha does not vanish.
SymmetryReport even_contact_symmetry(const DiffForm& alpha, const Sampler& s);

// Equivalent conditions for a volume-preserving characteristic field:
// ker d alpha = <W, R> and beta ^ d alpha = 0.
struct VolumePreservingReport {
  ZeroVerdict w_in_kernel;
  ZeroVerdict r_in_kernel;
  ZeroVerdict beta_dalpha;
};
VolumePreservingReport volume_preserving_conditions(const EngelData& data, const Sampler& s);

// From an Engel framing {W, X}: Y = [W,X], Z = [X,Y], alpha and beta dual to
// Z and Y in the frame {W, X, Y, Z}.
EngelData construct_forms_from_framing(const VectorField& W, const VectorField& X, const Sampler& s);

}  // namespace engelkit
