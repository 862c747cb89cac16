#include "engelkit/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "engelkit/error.hpp"
#include "engelkit/linalg.hpp"

namespace engelkit {
namespace {

using RatMatrix = std::vector<std::vector<Rational>>;

// Reduced row echelon form in place; returns the pivot columns.
std::vector<std::size_t> rref(RatMatrix& m, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < m.size(); ++col) {
    std::size_t pick = row;
    while (pick < m.size() && m[pick][col] == 0) ++pick;
    if (pick == m.size()) continue;
    std::swap(m[row], m[pick]);
    Rational lead = m[row][col];
    for (auto& v : m[row]) v /= lead;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][col] == 0) continue;
      Rational f = m[r][col];
      for (std::size_t c = 0; c < cols; ++c) m[r][c] -= f * m[row][c];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

bool is_zero(const LieVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& q) { return q == 0; });
}

LieVector scaled(const LieVector& v, const Rational& f) {
  LieVector out = v;
  for (auto& q : out) q *= f;
  return out;
}

LieVector sum(const LieVector& a, const LieVector& b) {
  LieVector out;
  for (std::size_t i = 0; i < 4; ++i) out[i] = a[i] + b[i];
  return out;
}

std::string lower(std::string s) {
  for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return s;
}

VectorField to_field(const Space& space, const LieVector& v) {
  std::vector<Expr> comps;
  for (const auto& q : v) comps.push_back(Expr::rational(q));
  return VectorField(space, comps);
}

bool verdicts_exact(const std::vector<NamedVerdict>& vs) {
  return std::all_of(vs.begin(), vs.end(),
                     [](const NamedVerdict& v) { return v.verdict.kind == ZeroKind::ExactZero; });
}

LieVector vec(const LieAlgebra4& l, const std::vector<std::pair<std::string, Rational>>& terms) {
  LieVector out;
  for (const auto& [name, q] : terms) {
    int i = l.index_of(name);
    if (i < 0) throw Error("unknown generator " + name);
    out[static_cast<std::size_t>(i)] += q;
  }
  return out;
}

Rational single(const std::map<std::string, std::vector<Rational>>& params, const std::string& name,
                const Rational& fallback) {
  auto it = params.find(name);
  if (it == params.end()) return fallback;
  if (it->second.size() != 1) throw Error("parameter " + name + " takes one value");
  return it->second.front();
}

}  // namespace

LieAlgebra4 LieAlgebra4::from_brackets(std::array<std::string, 4> generators,
                                       const std::vector<Bracket>& brackets) {
  LieAlgebra4 l;
  l.generators = std::move(generators);
  std::vector<std::pair<int, int>> seen;
  for (const auto& [a, b, value] : brackets) {
    int i = l.index_of(a), j = l.index_of(b);
    if (i < 0 || j < 0) throw Error("bracket [" + a + ", " + b + "] names an unknown generator");
    if (i == j) throw Error("bracket [" + a + ", " + a + "] must vanish");
    auto key = std::minmax(i, j);
    if (std::find(seen.begin(), seen.end(), std::pair{key.first, key.second}) != seen.end())
      throw Error("bracket [" + a + ", " + b + "] given twice");
    seen.emplace_back(key.first, key.second);
    LieVector v = vec(l, value);
    l.structure[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
    l.structure[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = scaled(v, Rational(-1));
  }
  return l;
}

int LieAlgebra4::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < 4; ++i)
    if (generators[i] == name) return static_cast<int>(i);
  return -1;
}

LieVector LieAlgebra4::basis(int i) const {
  LieVector v;
  v[static_cast<std::size_t>(i)] = 1;
  return v;
}

LieVector LieAlgebra4::bracket(const LieVector& x, const LieVector& y) const {
  LieVector out;
  for (std::size_t i = 0; i < 4; ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < 4; ++j) {
      if (y[j] == 0) continue;
      Rational f = x[i] * y[j];
      for (std::size_t k = 0; k < 4; ++k) out[k] += f * structure[i][j][k];
    }
  }
  return out;
}

std::string to_string(const LieAlgebra4& l, const LieVector& v) {
  std::ostringstream out;
  bool first = true;
  for (std::size_t i = 0; i < 4; ++i) {
    if (v[i] == 0) continue;
    Rational q = v[i];
    if (!first) out << (q < 0 ? " - " : " + ");
    else if (q < 0) out << "-";
    Rational mag = abs(q);
    if (mag != 1) out << to_string(mag) << "*";
    out << l.generators[i];
    first = false;
  }
  return first ? "0" : out.str();
}

JacobiReport jacobi_check(const LieAlgebra4& l) {
  JacobiReport r;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      const auto& a = l.structure[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      const auto& b = l.structure[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
      if (!is_zero(sum(a, b))) r.violations.push_back({i, j, -1});
    }
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      for (int k = j + 1; k < 4; ++k) {
        LieVector x = l.basis(i), y = l.basis(j), z = l.basis(k);
        LieVector cyc = sum(sum(l.bracket(x, l.bracket(y, z)), l.bracket(y, l.bracket(z, x))),
                            l.bracket(z, l.bracket(x, y)));
        if (!is_zero(cyc)) r.violations.push_back({i, j, k});
      }
  return r;
}

std::vector<LieVector> commutant(const LieAlgebra4& l, const std::vector<LieVector>& S) {
  // rows: component k of [Z, s]; columns: coordinates of Z
  RatMatrix m;
  for (const auto& s : S) {
    std::array<LieVector, 4> images;
    for (int i = 0; i < 4; ++i) images[static_cast<std::size_t>(i)] = l.bracket(l.basis(i), s);
    for (std::size_t k = 0; k < 4; ++k) {
      std::vector<Rational> row(4);
      for (std::size_t i = 0; i < 4; ++i) row[i] = images[i][k];
      m.push_back(row);
    }
  }
  auto pivots = rref(m, 4);
  std::vector<LieVector> basis;
  for (std::size_t free = 0; free < 4; ++free) {
    if (std::find(pivots.begin(), pivots.end(), free) != pivots.end()) continue;
    LieVector z;
    z[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) z[pivots[r]] = -m[r][free];
    basis.push_back(z);
  }
  return basis;
}

int span_rank(const std::vector<LieVector>& vs) {
  RatMatrix m;
  for (const auto& v : vs) m.emplace_back(v.begin(), v.end());
  return static_cast<int>(rref(m, 4).size());
}

Rational det4(const LieVector& a, const LieVector& b, const LieVector& c, const LieVector& d) {
  RatMatrix m{{a.begin(), a.end()}, {b.begin(), b.end()}, {c.begin(), c.end()}, {d.begin(), d.end()}};
  Rational det = 1;
  for (std::size_t col = 0; col < 4; ++col) {
    std::size_t pick = col;
    while (pick < 4 && m[pick][col] == 0) ++pick;
    if (pick == 4) return Rational(0);
    if (pick != col) {
      std::swap(m[pick], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (std::size_t r = col + 1; r < 4; ++r) {
      Rational f = m[r][col] / m[col][col];
      for (std::size_t k = col; k < 4; ++k) m[r][k] -= f * m[col][k];
    }
  }
  return det;
}

FramingSearch kengel_framing_search(const LieAlgebra4& l, const LieVector& W, const LieVector& X) {
  FramingSearch f;
  f.W = W;
  f.X = X;
  f.Y = l.bracket(W, X);
  LieVector wy = l.bracket(W, f.Y), xy = l.bracket(X, f.Y);
  if (span_rank({W, X}) != 2 || span_rank({W, X, f.Y, wy, xy}) != 4)
    throw PreconditionError("span{" + to_string(l, W) + ", " + to_string(l, X) +
                            "} is not bracket generating, so it is not an Engel structure");
  f.characteristic = span_rank({W, X, f.Y, wy}) == 3;
  f.commutant = commutant(l, {W, X});
  for (const auto& z : f.commutant) f.transversality.push_back(det4(W, X, f.Y, z));
  if (!f.characteristic) return f;
  if (is_zero(l.bracket(xy, W)) && is_zero(l.bracket(xy, X)) && det4(W, X, f.Y, xy) != 0) {
    f.R = xy;
    return f;
  }
  for (std::size_t i = 0; i < f.commutant.size(); ++i)
    if (f.transversality[i] != 0) {
      f.R = f.commutant[i];
      break;
    }
  return f;
}

std::vector<FramingSearch> blind_framing_search(const LieAlgebra4& l, int height) {
  std::vector<Rational> values{Rational(0)};
  for (int q = 1; q <= height; ++q)
    for (int p = 1; p <= height; ++p) {
      Rational v(p, q);
      v.canonicalize();
      if (std::find(values.begin(), values.end(), v) == values.end()) {
        values.push_back(v);
        values.push_back(-v);
      }
    }
  std::vector<LieVector> vectors;
  std::size_t n = values.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = 0; d < n; ++d) {
          LieVector v{values[a], values[b], values[c], values[d]};
          if (!is_zero(v)) vectors.push_back(v);
        }
  std::vector<FramingSearch> found;
  for (const auto& W : vectors)
    for (const auto& X : vectors) {
      LieVector Y = l.bracket(W, X);
      if (span_rank({W, X, Y}) != 3) continue;
      if (span_rank({W, X, Y, l.bracket(W, Y)}) != 3) continue;
      if (span_rank({W, X, Y, l.bracket(X, Y)}) != 4) continue;
      FramingSearch f = kengel_framing_search(l, W, X);
      if (f.found()) found.push_back(std::move(f));
    }
  return found;
}

Space lie_space(const LieAlgebra4& l) {
  FrameSpace::Builder b;
  for (const auto& g : l.generators) b.lie(g, lower(g));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) {
      std::vector<std::pair<std::string, Rational>> value;
      for (std::size_t k = 0; k < 4; ++k)
        if (l.structure[i][j][k] != 0) value.emplace_back(l.generators[k], l.structure[i][j][k]);
      if (!value.empty()) b.bracket(l.generators[i], l.generators[j], value);
    }
  return b.build();
}

ExportedFraming export_framing(const LieAlgebra4& l, const FramingSearch& f) {
  if (!f.found()) throw PreconditionError("no framing to export");
  Space space = lie_space(l);
  Sampler s = make_sampler(space);
  VectorField W = to_field(space, f.W), X = to_field(space, f.X), Y = to_field(space, f.Y),
              R = to_field(space, *f.R);
  auto coframe = dual_coframe({W, X, Y, R}, s);
  EngelData data = make_engel_data(coframe[3], coframe[2], W, X, s);
  Metric g = orthonormal({W, X, Y, R}, s);
  ExportedFraming out;
  out.check = kengel_check(data, g, R, s);
  KEngelFraming framing = kengel_framing(data, g, R, s);
  out.kdata = framing.kdata;
  out.kdata.rank.reset();
  out.invariants = framing.invariants;
  out.exact = verdicts_exact(out.check.engel_field) && verdicts_exact(out.check.killing) &&
              verdicts_exact(out.check.orthogonal) && verdicts_exact(out.invariants);
  return out;
}

std::vector<std::string> geometry_keys() { return {"s3xr", "sl2xr", "nil3xr", "sol_mn", "sol0", "sol1", "nil4"}; }

Geometry geometry(const std::string& key, const std::map<std::string, std::vector<Rational>>& params) {
  auto allow = [&](std::initializer_list<const char*> names) {
    for (const auto& [name, values] : params) {
      bool ok = false;
      for (const char* n : names) ok = ok || name == n;
      if (!ok) throw Error("geometry " + key + " has no parameter " + name);
    }
  };
  Geometry g;
  g.key = key;
  using B = LieAlgebra4::Bracket;
  if (key == "s3xr" || key == "sl2xr") {
    allow({"k"});
    Rational k = single(params, "k", Rational(key == "s3xr" ? 1 : -1));
    g.title = key == "s3xr" ? "S^3 x R" : "Sl(2,R) x R";
    g.params["k"] = k;
    g.algebra = LieAlgebra4::from_brackets(
        {"A", "B", "C", "Dt"},
        {B{"A", "B", {{"C", 1}}}, B{"B", "C", {{"A", 1}}}, B{"C", "A", {{"B", k}}}});
    g.W = vec(g.algebra, {{"Dt", 1}, {"B", 1}});
    g.X = vec(g.algebra, {{"A", 1}});
    g.expected_positive = true;
    g.metadata = "k = 1 is S^3 x R, k = -1 is Sl(2,R) x R; Dt is tangent to the R factor";
  } else if (key == "nil3xr") {
    allow({});
    g.title = "Nil^3 x R";
    g.algebra = LieAlgebra4::from_brackets(
        {"A", "B", "C", "D"},
        {B{"A", "B", {{"C", 1}}}, B{"D", "A", {{"B", -1}}}, B{"D", "B", {{"A", 1}}}});
    g.W = vec(g.algebra, {{"D", 1}});
    g.X = vec(g.algebra, {{"A", 1}});
    g.expected_positive = true;
    g.metadata = "subgeometry with isometry algebra Nil^3 semidirect R";
  } else if (key == "sol_mn") {
    allow({"c"});
    std::vector<Rational> c{Rational(3), Rational(-1), Rational(-2)};
    if (auto it = params.find("c"); it != params.end()) {
      if (it->second.size() != 3) throw Error("parameter c takes three values");
      c = it->second;
    }
    g.title = "Sol^4(m,n)";
    for (std::size_t i = 0; i < 3; ++i) g.params["c" + std::to_string(i + 1)] = c[i];
    g.algebra = LieAlgebra4::from_brackets({"X1", "X2", "X3", "T"}, {B{"T", "X1", {{"X1", c[0]}}},
                                                                   B{"T", "X2", {{"X2", c[1]}}},
                                                                   B{"T", "X3", {{"X3", c[2]}}}});
    g.W = vec(g.algebra, {{"X1", 1}, {"X2", 1}, {"X3", 1}});
    g.X = vec(g.algebra, {{"T", 1}});
    g.expected_positive = c[0] == 0 || c[1] == 0 || c[2] == 0;
    g.constraints = {{"c1 + c2 + c3 = 0", c[0] + c[1] + c[2] == 0}, {"c1 > c2 > c3", c[0] > c[1] && c[1] > c[2]}};
    g.metadata = "e^c1, e^c2, e^c3 are the roots of P(m,n) = -l^3 + m l^2 - n l + 1; rational c_i stand in";
  } else if (key == "sol0") {
    allow({"a", "b"});
    Rational a = single(params, "a", Rational(1)), b = single(params, "b", Rational(1));
    g.title = "Sol_0^4";
    g.params["a"] = a;
    g.params["b"] = b;
    g.algebra = LieAlgebra4::from_brackets(
        {"U1", "U2", "V", "T"}, {B{"T", "U1", {{"U1", a}, {"U2", b}}}, B{"T", "U2", {{"U1", -b}, {"U2", a}}},
                                 B{"T", "V", {{"V", -2 * a}}}});
    g.W = vec(g.algebra, {{"U1", 1}, {"V", 1}});
    g.X = vec(g.algebra, {{"T", 1}});
    g.expected_positive = false;
    g.constraints = {{"a != 0", a != 0}, {"b != 0", b != 0}};
    g.metadata = "e^(a + ib), e^(a - ib), e^(-2a) are the roots of P(m,n); rational a, b stand in";
  } else if (key == "sol1") {
    allow({});
    g.title = "Sol_1^4";
    g.algebra = LieAlgebra4::from_brackets(
        {"A", "B", "C", "T"}, {B{"T", "A", {{"A", -1}}}, B{"T", "B", {{"B", 1}}}, B{"A", "B", {{"C", 1}}}});
    g.W = vec(g.algebra, {{"T", 1}});
    g.X = vec(g.algebra, {{"A", 1}, {"B", 1}});
    g.expected_positive = true;
  } else if (key == "nil4") {
    allow({});
    g.title = "Nil^4";
    g.algebra = LieAlgebra4::from_brackets({"A", "B", "C", "D"},
                                           {B{"D", "A", {{"B", 1}}}, B{"D", "B", {{"C", 1}}}});
    g.W = vec(g.algebra, {{"A", 1}});
    g.X = vec(g.algebra, {{"D", 1}});
    g.expected_positive = true;
  } else {
    throw Error("unknown geometry " + key);
  }
  return g;
}

CatalogRow catalog_row(const Geometry& g) {
  CatalogRow row;
  row.geometry = g;
  row.jacobi = jacobi_check(g.algebra);
  if (!row.jacobi.holds()) return row;
  try {
    row.search = kengel_framing_search(g.algebra, g.W, g.X);
    if (row.search->found()) row.exported = export_framing(g.algebra, *row.search);
  } catch (const PreconditionError& e) {
    row.rejected = e.what();
  }
  return row;
}

std::vector<CatalogRow> catalog_run() {
  std::vector<Geometry> list{
      geometry("s3xr"),
      geometry("sl2xr"),
      geometry("nil3xr"),
      geometry("sol_mn", {{"c", {Rational(3), Rational(-1), Rational(-2)}}}),
      geometry("sol_mn", {{"c", {Rational(1), Rational(0), Rational(-1)}}}),
      geometry("sol0"),
      geometry("sol1"),
      geometry("nil4"),
  };
  std::vector<CatalogRow> rows;
  for (const auto& g : list) rows.push_back(catalog_row(g));
  return rows;
}

}  // namespace engelkit
