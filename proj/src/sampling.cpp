#include "engelkit/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "engelkit/normalize.hpp"

namespace engelkit {
namespace {

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};

double radical_inverse(std::uint64_t index, int base) {
  double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (index > 0) {
    r += f * static_cast<double>(index % static_cast<std::uint64_t>(base));
    index /= static_cast<std::uint64_t>(base);
    f *= inv;
  }
  return r;
}

double place(const Interval& iv, double u) { return iv.lo + u * (iv.hi - iv.lo); }

double wrap_or_clamp(const Interval& iv, double x) {
  double w = iv.hi - iv.lo;
  if (iv.periodic) {
    double u = std::fmod(x - iv.lo, w);
    if (u < 0) u += w;
    return iv.lo + u;
  }
  return std::clamp(x, iv.lo, iv.hi);
}

}  // namespace

std::string to_string(ZeroKind k) {
  switch (k) {
    case ZeroKind::ExactZero: return "ExactZero";
    case ZeroKind::SampledZero: return "SampledZero";
    case ZeroKind::Nonzero: return "Nonzero";
  }
  return {};
}

Sampler::Sampler(Domain domain, SamplingPolicy policy)
    : domain_(std::move(domain)), policy_(policy) {
  if (policy_.samples < 1) throw Error("sample count must be positive");
  std::size_t dims = domain_.coordinates.size();
  if (dims > std::size(kPrimes)) throw Error("too many coordinates for the sample sequence");
  std::mt19937_64 rng(policy_.seed);
  std::vector<double> shift(dims);
  for (auto& s : shift) s = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  auto make = [&](std::uint64_t index) {
    Env env = domain_.parameters;
    for (std::size_t d = 0; d < dims; ++d) {
      double u = radical_inverse(index, kPrimes[d]) + shift[d];
      u -= std::floor(u);
      env[domain_.coordinates[d].first] = place(domain_.coordinates[d].second, u);
    }
    return env;
  };
  std::uint64_t total = static_cast<std::uint64_t>(policy_.samples);
  for (std::uint64_t i = 1; i <= total; ++i) points_.push_back(make(i));
  for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(std::max(0, policy_.retry_bound)); ++i)
    spares_.push_back(make(total + 1 + i));
}

Witness Sampler::witness_at(const Env& point, double value) const {
  Witness w;
  for (const auto& [name, iv] : domain_.coordinates) w.point.emplace_back(name, point.at(name));
  w.value = value;
  return w;
}

Expr Sampler::prepare(const Expr& e) const {
  return policy_.reduce_trig ? reduce_trig(e) : normalize(e);
}

std::vector<std::vector<double>> Sampler::values(const std::vector<Expr>& exprs,
                                                 std::vector<Env>* used) const {
  std::vector<std::vector<double>> out;
  out.reserve(points_.size());
  std::size_t spare = 0;
  for (const auto& p : points_) {
    const Env* at = &p;
    for (;;) {
      try {
        std::vector<double> row;
        row.reserve(exprs.size());
        for (const auto& e : exprs) row.push_back(evaluate(e, *at));
        out.push_back(std::move(row));
        if (used) used->push_back(*at);
        break;
      } catch (const SingularityError& err) {
        if (spare >= spares_.size())
          throw SingularityError("singular at every replacement sample",
                                 witness_at(*at, err.witness().value));
        at = &spares_[spare++];
      }
    }
  }
  return out;
}

ZeroVerdict Sampler::is_zero(const Expr& e) const { return all_zero({e}); }

ZeroVerdict Sampler::all_zero(const std::vector<Expr>& components) const {
  std::vector<Expr> live;
  for (const auto& c : components) {
    Expr n = prepare(c);
    if (!n.is_zero_literal()) live.push_back(n);
  }
  ZeroVerdict v;
  if (live.empty()) return v;
  std::vector<Env> used;
  auto rows = values(live, &used);
  std::size_t best = 0;
  double best_val = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (double x : rows[i])
      if (std::abs(x) > v.max_abs) {
        v.max_abs = std::abs(x);
        best = i;
        best_val = x;
      }
  if (v.max_abs <= policy_.abs_tol) {
    v.kind = ZeroKind::SampledZero;
    return v;
  }
  v.kind = ZeroKind::Nonzero;
  v.witness = witness_at(used[best], best_val);
  return v;
}

NonvanishingVerdict Sampler::nonvanishing(const Expr& e) const { return nonvanishing_any({e}); }

NonvanishingVerdict Sampler::nonvanishing_any(const std::vector<Expr>& components) const {
  std::vector<Expr> live;
  for (const auto& c : components) {
    Expr n = prepare(c);
    if (!n.is_zero_literal()) live.push_back(n);
  }
  if (live.empty()) {
    NonvanishingVerdict v;
    v.holds = false;
    v.witness = witness_at(points_.front(), 0.0);
    return v;
  }
  return minimize([&](const Env& p) {
    double m = 0.0;
    for (const auto& e : live) m = std::max(m, std::abs(evaluate(e, p)));
    return m;
  });
}

NonvanishingVerdict Sampler::minimize(const std::function<double(const Env&)>& magnitude) const {
  auto safe = [&](const Env& p) {
    try {
      return magnitude(p);
    } catch (const SingularityError&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  std::vector<std::pair<double, std::size_t>> ranked;
  for (std::size_t i = 0; i < points_.size(); ++i) ranked.emplace_back(safe(points_[i]), i);
  std::sort(ranked.begin(), ranked.end());
  NonvanishingVerdict best;
  best.min_abs = ranked.front().first;
  Env best_point = points_[ranked.front().second];
  // Local compass search from the smallest samples catches double zeros that
  // sit between sample points.
  std::size_t starts = std::min<std::size_t>(3, ranked.size());
  for (std::size_t s = 0; s < starts; ++s) {
    Env p = points_[ranked[s].second];
    double fp = ranked[s].first;
    std::vector<double> step;
    for (const auto& [name, iv] : domain_.coordinates) step.push_back(0.1 * (iv.hi - iv.lo));
    for (int iter = 0; iter < 400 && fp > 0.0; ++iter) {
      bool improved = false;
      for (std::size_t d = 0; d < domain_.coordinates.size(); ++d) {
        const auto& [name, iv] = domain_.coordinates[d];
        for (double sign : {1.0, -1.0}) {
          Env q = p;
          q[name] = wrap_or_clamp(iv, p.at(name) + sign * step[d]);
          double fq = safe(q);
          if (fq < fp) {
            p = std::move(q);
            fp = fq;
            improved = true;
            break;
          }
        }
      }
      if (!improved) {
        bool tiny = true;
        for (std::size_t d = 0; d < step.size(); ++d) {
          step[d] *= 0.5;
          const auto& iv = domain_.coordinates[d].second;
          if (step[d] > 1e-12 * (iv.hi - iv.lo)) tiny = false;
        }
        if (tiny) break;
      }
    }
    if (fp < best.min_abs) {
      best.min_abs = fp;
      best_point = p;
    }
  }
  best.holds = best.min_abs > policy_.abs_tol;
  best.witness = witness_at(best_point, best.min_abs);
  return best;
}

}  // namespace engelkit
