#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "engelkit/calculus.hpp"
#include "engelkit/error.hpp"
#include "engelkit/expr.hpp"

namespace engelkit {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  bool periodic = false;
};

struct SamplingPolicy {
  std::uint64_t seed = 1;
  int samples = 64;
  double abs_tol = 1e-9;
  int retry_bound = 32;
  // Apply sin^2 = 1 - cos^2 before deciding exactness. Off for plain scalar
  // checks so that trigonometric identities are decided by sampling.
  bool reduce_trig = false;
};

struct Domain {
  std::vector<std::pair<std::string, Interval>> coordinates;
  Env parameters;
};

enum class ZeroKind { ExactZero, SampledZero, Nonzero };
std::string to_string(ZeroKind k);

struct ZeroVerdict {
  ZeroKind kind = ZeroKind::ExactZero;
  double max_abs = 0.0;
  std::optional<Witness> witness;  // set for Nonzero
  bool holds() const { return kind != ZeroKind::Nonzero; }
};

struct NonvanishingVerdict {
  bool holds = true;
  double min_abs = 0.0;
  Witness witness;  // point of smallest magnitude found
};

// Deterministic low-discrepancy sample set over a domain: a Halton sequence
// with a seed-derived Cranley-Patterson rotation. Periodic coordinates sample
// the half-open cell. A pool of spare points replaces singular samples.
class Sampler {
 public:
  Sampler(Domain domain, SamplingPolicy policy);

  const Domain& domain() const { return domain_; }
  const SamplingPolicy& policy() const { return policy_; }
  const std::vector<Env>& points() const { return points_; }

  ZeroVerdict is_zero(const Expr& e) const;
  ZeroVerdict all_zero(const std::vector<Expr>& components) const;

  NonvanishingVerdict nonvanishing(const Expr& e) const;
  // Nonvanishing of max_k |components_k|, i.e. of a form or field.
  NonvanishingVerdict nonvanishing_any(const std::vector<Expr>& components) const;

  // Values of a set of expressions at every sample; singular samples are
  // swapped for spare points.
  std::vector<std::vector<double>> values(const std::vector<Expr>& exprs,
                                          std::vector<Env>* used = nullptr) const;

  Witness witness_at(const Env& point, double value) const;

 private:
  Expr prepare(const Expr& e) const;
  NonvanishingVerdict minimize(const std::function<double(const Env&)>& magnitude) const;

  Domain domain_;
  SamplingPolicy policy_;
  std::vector<Env> points_;
  std::vector<Env> spares_;
};

}  // namespace engelkit
