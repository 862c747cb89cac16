#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "engelkit/calculus.hpp"
#include "engelkit/expr.hpp"
#include "engelkit/parse.hpp"
#include "engelkit/sampling.hpp"

namespace engelkit {

struct CoordinateSpec {
  std::string name;
  Interval interval;
};

// One basis direction: either the coordinate vector field of a chart
// coordinate, or an abstract direction with constant brackets.
struct Direction {
  std::string name;     // field token is "@" + name
  std::string coframe;  // dual 1-form token
  int coordinate = -1;  // index into coordinates(), or -1 for a Lie direction
};

// A parallelized space: ordered frame mixing coordinate directions and Lie
// directions. Lie brackets are constant rationals satisfying Jacobi; brackets
// involving a coordinate direction vanish; Lie directions annihilate scalars.
class FrameSpace {
 public:
  class Builder {
   public:
    Builder& coordinate(std::string name, Interval interval, std::string coframe = {});
    Builder& lie(std::string name, std::string coframe);
    // [a, b] = sum of coefficient * direction
    Builder& bracket(const std::string& a, const std::string& b,
                     const std::vector<std::pair<std::string, Rational>>& value);
    Builder& parameter(std::string name, double value);
    std::shared_ptr<const FrameSpace> build() const;

   private:
    std::vector<CoordinateSpec> coordinates_;
    std::vector<Direction> directions_;
    std::vector<std::tuple<std::string, std::string, std::vector<std::pair<std::string, Rational>>>>
        brackets_;
    std::vector<std::pair<std::string, double>> parameters_;
  };

  int dim() const { return static_cast<int>(directions_.size()); }
  const std::vector<Direction>& directions() const { return directions_; }
  const Direction& direction(int i) const { return directions_.at(static_cast<std::size_t>(i)); }
  const std::vector<CoordinateSpec>& coordinates() const { return coordinates_; }
  const Env& parameters() const { return parameters_; }
  bool is_lie(int i) const { return direction(i).coordinate < 0; }
  bool has_lie_directions() const;

  // c^k_ij with [e_i, e_j] = sum_k c^k_ij e_k.
  const Rational& structure(int i, int j, int k) const;

  int index_of(std::string_view direction_name) const;
  int coframe_index_of(std::string_view coframe_name) const;
  // Direction index of a chart coordinate, or -1.
  int direction_of_coordinate(std::string_view coordinate) const;

  Domain domain() const;
  SymbolTable symbols() const;

  // Same space with one more coordinate direction appended.
  std::shared_ptr<const FrameSpace> with_coordinate(CoordinateSpec c, std::string coframe = {}) const;

 private:
  std::vector<CoordinateSpec> coordinates_;
  std::vector<Direction> directions_;
  Env parameters_;
  std::vector<Rational> structure_;  // dim^3, index (i*dim + j)*dim + k
};

using Space = std::shared_ptr<const FrameSpace>;

Sampler make_sampler(const Space& space, const SamplingPolicy& policy = {});

class VectorField {
 public:
  VectorField() = default;
  VectorField(Space space, std::vector<Expr> components);  // normalizes
  static VectorField zero(Space space);
  static VectorField basis(Space space, int i);

  const Space& space() const { return space_; }
  const std::vector<Expr>& components() const { return components_; }
  const Expr& operator[](int i) const { return components_.at(static_cast<std::size_t>(i)); }

 private:
  Space space_;
  std::vector<Expr> components_;
};

// Coefficients indexed by strictly increasing multi-indices, stored as bit
// masks over the coframe. Zero coefficients are not stored. Degrees above the
// dimension are allowed and always zero, so d and i_X keep degrees consistent.
class DiffForm {
 public:
  using Mask = std::uint32_t;

  DiffForm() = default;
  DiffForm(Space space, int degree);
  static DiffForm scalar(Space space, const Expr& f);
  static DiffForm basis(Space space, int i);
  // Builds from (mask, coefficient) pairs; normalizes and drops zeros.
  static DiffForm from_terms(Space space, int degree, const std::vector<std::pair<Mask, Expr>>& terms);

  const Space& space() const { return space_; }
  int degree() const { return degree_; }
  const std::map<Mask, Expr>& terms() const { return terms_; }
  Expr coefficient(Mask m) const;
  Expr value() const { return coefficient(0); }  // 0-forms
  bool is_literal_zero() const { return terms_.empty(); }
  std::vector<Expr> coefficients() const;

 private:
  Space space_;
  int degree_ = 0;
  std::map<Mask, Expr> terms_;
};

// ---- fields
Expr apply(const VectorField& x, const Expr& f);  // X(f)
VectorField bracket(const VectorField& x, const VectorField& y);
VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator*(const Expr& f, const VectorField& a);

// ---- forms
DiffForm wedge(const DiffForm& a, const DiffForm& b);
DiffForm interior_product(const VectorField& x, const DiffForm& w);
DiffForm exterior_derivative(const DiffForm& w);
DiffForm lie_derivative(const VectorField& x, const DiffForm& w);
Expr pairing(const DiffForm& one_form, const VectorField& v);
// w(v1, ..., vp)
Expr evaluate_on(const DiffForm& w, const std::vector<VectorField>& vs);
DiffForm operator+(const DiffForm& a, const DiffForm& b);
DiffForm operator-(const DiffForm& a, const DiffForm& b);
DiffForm operator*(const Expr& f, const DiffForm& a);

// Replace every coefficient by simplify(coefficient).
DiffForm map_coefficients(const DiffForm& w, Expr (*simplify)(const Expr&));
VectorField map_components(const VectorField& v, Expr (*simplify)(const Expr&));

ZeroVerdict zero_test(const DiffForm& w, const Sampler& s);
ZeroVerdict zero_test(const VectorField& v, const Sampler& s);
NonvanishingVerdict nonvanishing(const DiffForm& w, const Sampler& s);
NonvanishingVerdict nonvanishing(const VectorField& v, const Sampler& s);

// Printed with field tokens "@name" and coframe tokens, e.g.
// "-sin(2*pi*t)*@x + cos(2*pi*t)*@y" or "dz - cos(2*pi*t)*dx".
std::string to_string(const VectorField& v);
std::string to_string(const DiffForm& w);

int popcount(DiffForm::Mask m);

}  // namespace engelkit
