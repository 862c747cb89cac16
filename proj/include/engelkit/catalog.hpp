#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "engelkit/kengel.hpp"
#include "engelkit/rational.hpp"

namespace engelkit {

// Element of a 4-dimensional Lie algebra in generator coordinates.
using LieVector = std::array<Rational, 4>;

struct LieAlgebra4 {
  std::array<std::string, 4> generators;
  // structure[i][j][k] = c^k_ij, [e_i, e_j] = sum_k c^k_ij e_k
  std::array<std::array<LieVector, 4>, 4> structure{};

  using Bracket = std::tuple<std::string, std::string, std::vector<std::pair<std::string, Rational>>>;
  // Fills [b, a] = -[a, b]. Throws Error on unknown names or a bracket given twice.
  static LieAlgebra4 from_brackets(std::array<std::string, 4> generators, const std::vector<Bracket>& brackets);

  int index_of(const std::string& name) const;  // -1 when absent
  LieVector basis(int i) const;
  LieVector bracket(const LieVector& x, const LieVector& y) const;
};

std::string to_string(const LieAlgebra4& l, const LieVector& v);

struct JacobiReport {
  // (i, j, k) with a nonzero cyclic sum, and antisymmetry failures as (i, j, -1)
  std::vector<std::array<int, 3>> violations;
  bool holds() const { return violations.empty(); }
};
JacobiReport jacobi_check(const LieAlgebra4& l);

// Exact basis of {Z : [Z, s] = 0 for all s in S}, in reduced echelon form
// with each free coordinate set to 1.
std::vector<LieVector> commutant(const LieAlgebra4& l, const std::vector<LieVector>& S);

// Rank of a list of vectors over Q.
int span_rank(const std::vector<LieVector>& vs);
Rational det4(const LieVector& a, const LieVector& b, const LieVector& c, const LieVector& d);

struct FramingSearch {
  LieVector W, X, Y;               // Y = [W, X]
  bool characteristic = false;     // [W, Y] in span{W, X, Y}
  std::vector<LieVector> commutant;  // of {W, X}; equals that of {W, X, Y}
  // det(W, X, Y, z) for each commutant basis element; all zero is the
  // nonexistence certificate
  std::vector<Rational> transversality;
  std::optional<LieVector> R;
  bool found() const { return R.has_value(); }
};
// R is [X, Y] when that lies in the commutant and is transverse, otherwise the
// first transverse commutant basis element. Throws PreconditionError when
// span{W, X} is not bracket generating.
FramingSearch kengel_framing_search(const LieAlgebra4& l, const LieVector& W, const LieVector& X);

// Every pair (W, X) with coefficients p/q, |p| <= height, 1 <= q <= height,
// spanning a bracket-generating plane with W characteristic; returns those
// with a framing.
std::vector<FramingSearch> blind_framing_search(const LieAlgebra4& l, int height);

// Left-invariant data on the group: Lie directions named after the
// generators, coframe names in lower case, metric making {W, X, Y, R}
// orthonormal, Z = R.
struct ExportedFraming {
  KEngelData kdata;
  KEngelCheck check;
  std::vector<NamedVerdict> invariants;  // from kengel_framing
  bool exact = false;                    // every verdict is ExactZero or exactly nonzero
  bool holds() const { return check.holds() && all_hold(invariants); }
};
Space lie_space(const LieAlgebra4& l);
ExportedFraming export_framing(const LieAlgebra4& l, const FramingSearch& f);

struct Geometry {
  std::string key;    // catalog name, e.g. "nil4"
  std::string title;  // e.g. "Nil^4"
  std::map<std::string, Rational> params;
  LieAlgebra4 algebra;
  LieVector W, X;
  bool expected_positive = false;
  // linear parameter constraints and their status, e.g. "c1 > c2 > c3: no"
  std::vector<std::pair<std::string, bool>> constraints;
  std::string metadata;
};

// Keys: s3xr, sl2xr, nil3xr, sol_mn, sol0, sol1, nil4. `params` overrides
// defaults: k for s3xr/sl2xr, c (three values) for sol_mn, a and b for sol0.
// Throws Error on an unknown key or parameter.
Geometry geometry(const std::string& key, const std::map<std::string, std::vector<Rational>>& params = {});
std::vector<std::string> geometry_keys();

struct CatalogRow {
  Geometry geometry;
  JacobiReport jacobi;
  std::optional<FramingSearch> search;
  std::string rejected;  // PreconditionError text when D is not bracket generating
  std::optional<ExportedFraming> exported;
  bool positive() const { return search && search->found() && exported && exported->holds(); }
  bool agrees() const { return jacobi.holds() && positive() == geometry.expected_positive; }
};
CatalogRow catalog_row(const Geometry& g);

// S^3 x R, Sl(2,R) x R, Nil^3 x R, Sol^4(m,n) with all c_i != 0, Sol^4(m,n)
// with c_2 = 0, Sol_0^4, Sol_1^4, Nil^4.
std::vector<CatalogRow> catalog_run();

}  // namespace engelkit
