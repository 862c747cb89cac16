#pragma once

#include <optional>
#include <string>
#include <vector>

#include "engelkit/engel.hpp"

namespace engelkit {

// M x R with fiber coordinate s on [-1, 1] and eta = beta + s alpha. The
// forms are lifted to the 5-dimensional space; s is its last direction.
struct Contactization {
  Space space;
  std::string fiber;  // name of the s coordinate, "s" unless M already uses it
  DiffForm alpha;
  DiffForm beta;
  DiffForm eta;
  NonvanishingVerdict contact;  // eta ^ d eta ^ d eta
  ZeroVerdict expansion;        // d eta ^ d eta minus its expansion in alpha, beta, ds
  ZeroVerdict restriction;      // eta at s = 0 minus beta
  std::optional<EngelData> source;
};

// Throws PreconditionError (with the witness) when eta ^ d eta^2 vanishes at a
// sample, i.e. the input forms are not Engel.
Contactization contactize(const DiffForm& alpha, const DiffForm& beta, const Sampler& s);
Contactization contactize(const EngelData& data, const Sampler& s);

// Sampler on the contactization with the policy of `base`.
Sampler fiber_sampler(const Contactization& c, const Sampler& base);

// Extends a field or form on M to M x R by zero along the extra direction.
VectorField lift(const VectorField& v, const Space& product);
DiffForm lift(const DiffForm& w, const Space& product);

// Pullback along (p, s) -> (p, value(p, s)) where `direction` is the fiber
// coordinate: coefficients are substituted and ds becomes d(value).
DiffForm pull_back_fiber(const DiffForm& w, int direction, const Expr& value);

// A form on M x R with no ds terms and no s dependence, read on M.
DiffForm restrict_to_base(const DiffForm& w, const Space& base);

struct ContactReebReport {
  VectorField formula;  // T + sW + (c_TR + s d_TR + s^2 d_WR) ds, adapted framing
  VectorField solved;   // eta(R) = 1, i_R d eta = 0
  ZeroVerdict agreement;
  ZeroVerdict normalized;  // eta(formula) - 1
  ZeroVerdict kernel;      // i_formula d eta
  Expr c_tr;
  Expr slice_component;    // ds component of the formula at s = 0
  bool holds() const { return agreement.holds() && normalized.holds() && kernel.holds(); }
};
// Needs a contactization built from EngelData.
ContactReebReport reeb_of_contactization(const Contactization& c, const Sampler& s);

struct GraphicalPullback {
  EngelData data;            // (alpha, beta + g alpha) with the source framing
  EngelFormVerdicts engel;
  ZeroVerdict beta_matches;  // (eta on the graph of g) - (beta + g alpha)
  ZeroVerdict alpha_matches; // (L_ds eta on the graph of g) - alpha
  std::vector<NamedVerdict> shear_law;  // closed forms with nu = g
  bool holds() const;
};
GraphicalPullback graphical_pullback(const EngelData& data, const Expr& g, const Sampler& s);

// psi(p, s) = (p, f s + g) with psi* eta_new = mu eta_old, for new forms
// (lambda alpha, mu beta + nu alpha).
struct ContactomorphismReport {
  Expr lambda;
  Expr mu;
  Expr nu;
  Expr f;  // mu / lambda
  Expr g;  // -nu / lambda
  ZeroVerdict decomposition;  // new forms minus (lambda alpha, mu beta + nu alpha)
  ZeroVerdict pullback;       // psi* eta_new - mu eta_old
  bool holds() const { return decomposition.holds() && pullback.holds(); }
};
// Throws DegenerateFrameError when lambda or mu vanishes at a sample.
ContactomorphismReport contactomorphism_data(const EngelData& old_data, const DiffForm& new_alpha,
                                             const DiffForm& new_beta, const Sampler& s);

}  // namespace engelkit
