#include "engelkit/manifest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "engelkit/normalize.hpp"
#include "engelkit/parse.hpp"
#include "manifest_ops.hpp"

namespace engelkit {

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::vector<std::string> words(std::string_view s) {
  std::istringstream in{std::string(s)};
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

struct Line {
  int number;
  std::string text;
};

// Splits "key = value" at the first '='.
std::pair<std::string, std::string> key_value(const Line& l) {
  auto eq = l.text.find('=');
  if (eq == std::string::npos) throw ManifestError("expected 'key = value'", l.number);
  std::string key = trim(std::string_view(l.text).substr(0, eq));
  std::string value = trim(std::string_view(l.text).substr(eq + 1));
  if (key.empty()) throw ManifestError("missing key", l.number);
  return {key, value};
}

std::vector<std::string> tokens(const Space& space, bool fields) {
  std::vector<std::string> out;
  for (const auto& d : space->directions()) out.push_back(fields ? "@" + d.name : d.coframe);
  return out;
}

// Coefficients of an expression that is linear in `basis`.
std::vector<Expr> linearize(const Expr& e, const std::vector<std::string>& basis) {
  std::vector<Expr> coefs;
  Expr rest = e;
  for (const auto& b : basis) {
    Expr c = differentiate(e, b);
    for (const auto& other : basis)
      if (!differentiate(c, other).is_zero_literal())
        throw Error("not linear in '" + other + "'");
    rest = rest - c * Expr::coord(b);
    coefs.push_back(c);
  }
  if (!normalize(rest).is_zero_literal()) throw Error("term without a basis token");
  return coefs;
}

std::vector<Expr> parse_linear(std::string_view text, const Space& space, const std::map<std::string, Expr>& bindings,
                               bool fields) {
  if (!space) throw ManifestError("a [space] section is required", 0);
  SymbolTable symbols = space->symbols();
  symbols.substitutions = bindings;
  symbols.basis = tokens(space, fields);
  try {
    return linearize(parse(text, symbols), symbols.basis);
  } catch (const ManifestError&) {
    throw;
  } catch (const Error& e) {
    throw ManifestError(std::string(fields ? "field" : "form") + " '" + std::string(text) + "': " + e.what(), 0);
  }
}

double number(const std::string& text, int line) {
  try {
    return evaluate(parse(text, SymbolTable{}), Env{});
  } catch (const Error& e) {
    throw ManifestError("bad number '" + text + "': " + e.what(), line);
  }
}

long integer(const std::string& text, int line) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw ManifestError("expected an integer, got '" + text + "'", line);
  return v;
}

bool boolean(const std::string& text, int line) {
  if (text == "true" || text == "yes") return true;
  if (text == "false" || text == "no") return false;
  throw ManifestError("expected true or false, got '" + text + "'", line);
}

// Policy keys shared by [policy] and task sections; false when `key` is not one.
bool policy_key(PolicyOverrides& p, const std::string& key, const std::string& value, int line) {
  if (key == "seed") {
    long v = integer(value, line);
    if (v < 0) throw ManifestError("seed must be non-negative", line);
    p.seed = static_cast<std::uint64_t>(v);
  } else if (key == "samples") {
    long v = integer(value, line);
    if (v < 1) throw ManifestError("samples must be positive", line);
    p.samples = static_cast<int>(v);
  } else if (key == "tol") {
    double v = number(value, line);
    if (!(v > 0)) throw ManifestError("tol must be positive", line);
    p.tol = v;
  } else if (key == "reduce_trig") {
    p.reduce_trig = boolean(value, line);
  } else {
    return false;
  }
  return true;
}

Space build_space(const std::vector<Line>& lines, std::map<std::string, Expr>& bindings) {
  FrameSpace::Builder builder;
  std::vector<std::string> lie_names;
  std::vector<std::string> names;
  std::vector<std::pair<Line, std::vector<std::string>>> brackets;
  for (const auto& l : lines) {
    auto w = words(l.text);
    const std::string& kind = w[0];
    if (kind == "coordinate") {
      if (w.size() != 5 && w.size() != 6)
        throw ManifestError("expected 'coordinate NAME periodic|interval LO HI [COFRAME]'", l.number);
      if (w[2] != "periodic" && w[2] != "interval")
        throw ManifestError("coordinate kind must be periodic or interval", l.number);
      Interval iv{number(w[3], l.number), number(w[4], l.number), w[2] == "periodic"};
      if (!(iv.hi > iv.lo)) throw ManifestError("empty interval", l.number);
      builder.coordinate(w[1], iv, w.size() == 6 ? w[5] : "");
      names.push_back(w[1]);
    } else if (kind == "lie") {
      if (w.size() != 3) throw ManifestError("expected 'lie NAME COFRAME'", l.number);
      builder.lie(w[1], w[2]);
      lie_names.push_back(w[1]);
      names.push_back(w[1]);
    } else if (kind == "bracket") {
      brackets.emplace_back(l, w);
    } else if (kind == "parameter") {
      auto eq = l.text.find('=');
      if (w.size() < 4 || eq == std::string::npos || w[2] != "=")
        throw ManifestError("expected 'parameter NAME = VALUE'", l.number);
      if (!is_identifier(w[1])) throw ManifestError("bad parameter name '" + w[1] + "'", l.number);
      SymbolTable s;
      s.substitutions = bindings;
      std::optional<Rational> q;
      try {
        q = as_rational(normalize(parse(trim(l.text.substr(eq + 1)), s)));
      } catch (const Error& e) {
        throw ManifestError(e.what(), l.number);
      }
      if (!q) throw ManifestError("parameter '" + w[1] + "' must have a rational value", l.number);
      bindings[w[1]] = Expr::rational(*q);
    } else {
      throw ManifestError("unknown [space] entry '" + kind + "'", l.number);
    }
  }
  for (const auto& n : names)
    if (!is_identifier(n)) throw ManifestError("bad direction name '" + n + "'", 0);
  if (names.empty()) throw ManifestError("[space] declares no directions", lines.empty() ? 0 : lines[0].number);

  // Bracket values are constant combinations of the Lie directions.
  SymbolTable s;
  s.substitutions = bindings;
  for (const auto& n : lie_names) s.basis.push_back("@" + n);
  for (const auto& [l, w] : brackets) {
    auto eq = l.text.find('=');
    if (w.size() < 5 || w[3] != "=" || eq == std::string::npos)
      throw ManifestError("expected 'bracket A B = FIELD'", l.number);
    for (const auto& side : {w[1], w[2]})
      if (std::find(lie_names.begin(), lie_names.end(), side) == lie_names.end())
        throw ManifestError("'" + side + "' is not a lie direction", l.number);
    std::vector<std::pair<std::string, Rational>> value;
    try {
      auto coefs = linearize(parse(trim(l.text.substr(eq + 1)), s), s.basis);
      for (std::size_t i = 0; i < coefs.size(); ++i) {
        auto q = as_rational(coefs[i]);
        if (!q) throw Error("bracket coefficients must be rational");
        if (*q != 0) value.emplace_back(lie_names[i], *q);
      }
    } catch (const ManifestError&) {
      throw;
    } catch (const Error& e) {
      throw ManifestError(e.what(), l.number);
    }
    builder.bracket(w[1], w[2], value);
  }
  try {
    return builder.build();
  } catch (const Error& e) {
    throw ManifestError(e.what(), lines[0].number);
  }
}

}  // namespace

void PolicyOverrides::apply(SamplingPolicy& p) const {
  if (seed) p.seed = *seed;
  if (samples) p.samples = *samples;
  if (tol) p.abs_tol = *tol;
  if (reduce_trig) p.reduce_trig = *reduce_trig;
}

const std::string* ManifestTask::arg(std::string_view key) const {
  for (const auto& [k, v] : args)
    if (k == key) return &v;
  return nullptr;
}

std::vector<std::string> manifest_operations() {
  std::vector<std::string> out;
  for (const auto& op : detail::op_specs()) out.push_back(op.name);
  return out;
}

VectorField parse_field(std::string_view text, const Space& space, const std::map<std::string, Expr>& bindings) {
  return VectorField(space, parse_linear(text, space, bindings, true));
}

DiffForm parse_one_form(std::string_view text, const Space& space, const std::map<std::string, Expr>& bindings) {
  auto coefs = parse_linear(text, space, bindings, false);
  std::vector<std::pair<DiffForm::Mask, Expr>> terms;
  for (std::size_t i = 0; i < coefs.size(); ++i) terms.emplace_back(DiffForm::Mask{1} << i, coefs[i]);
  return DiffForm::from_terms(space, 1, terms);
}

Manifest parse_manifest(std::string_view text, std::string source) {
  Manifest m;
  m.source = std::move(source);

  std::vector<Line> lines;
  {
    std::istringstream in{std::string(text)};
    int n = 0;
    for (std::string raw; std::getline(in, raw);) {
      ++n;
      auto hash = raw.find('#');
      std::string t = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
      if (!t.empty()) lines.push_back({n, t});
    }
  }
  if (lines.empty() || words(lines[0].text) != std::vector<std::string>{"engelkit-manifest", "1"})
    throw ManifestError("first line must be 'engelkit-manifest 1'", lines.empty() ? 1 : lines[0].number);

  std::map<std::string, std::vector<Line>> sections;
  std::vector<std::pair<Line, std::vector<Line>>> task_sections;
  std::vector<Line>* current = nullptr;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line& l = lines[i];
    if (l.text.front() == '[') {
      if (l.text.back() != ']') throw ManifestError("unterminated section header", l.number);
      auto w = words(l.text.substr(1, l.text.size() - 2));
      if (w.size() == 2 && w[0] == "task") {
        if (!is_identifier(w[1])) throw ManifestError("bad task name '" + w[1] + "'", l.number);
        task_sections.push_back({l, {}});
        current = &task_sections.back().second;
        continue;
      }
      if (w.size() != 1 || (w[0] != "space" && w[0] != "policy" && w[0] != "forms" && w[0] != "fields" &&
                            w[0] != "metrics"))
        throw ManifestError("unknown section '" + l.text + "'", l.number);
      if (sections.count(w[0])) throw ManifestError("section [" + w[0] + "] repeated", l.number);
      current = &sections[w[0]];
      continue;
    }
    if (!current) {
      auto [k, v] = key_value(l);
      if (k != "name") throw ManifestError("only 'name' may precede the first section", l.number);
      if (!is_identifier(v)) throw ManifestError("bad manifest name '" + v + "'", l.number);
      m.name = v;
      continue;
    }
    current->push_back(l);
  }
  if (m.name.empty()) throw ManifestError("missing 'name = ...'", lines[0].number);

  if (sections.count("space")) m.space = build_space(sections["space"], m.bindings);

  for (const auto& l : sections["policy"]) {
    auto [k, v] = key_value(l);
    if (!policy_key(m.policy, k, v, l.number)) throw ManifestError("unknown policy key '" + k + "'", l.number);
  }

  std::vector<std::string> declared;
  auto declare = [&](const std::string& name, int line) {
    if (!is_identifier(name)) throw ManifestError("bad name '" + name + "'", line);
    if (std::find(declared.begin(), declared.end(), name) != declared.end())
      throw ManifestError("'" + name + "' declared twice", line);
    declared.push_back(name);
  };
  auto with_line = [](int line, auto&& f) {
    try {
      return f();
    } catch (const ManifestError& e) {
      if (e.line() > 0) throw;
      throw ManifestError(e.what(), line);
    }
  };
  for (const auto& l : sections["forms"]) {
    auto [k, v] = key_value(l);
    declare(k, l.number);
    m.forms.emplace(k, with_line(l.number, [&] { return parse_one_form(v, m.space, m.bindings); }));
  }
  for (const auto& l : sections["fields"]) {
    auto [k, v] = key_value(l);
    declare(k, l.number);
    m.fields.emplace(k, with_line(l.number, [&] { return parse_field(v, m.space, m.bindings); }));
  }
  for (const auto& l : sections["metrics"]) {
    auto [k, v] = key_value(l);
    declare(k, l.number);
    auto w = words(v);
    if (w.size() < 2 || w[0] != "orthonormal")
      throw ManifestError("expected 'NAME = orthonormal FIELD ...'", l.number);
    m.metrics[k] = MetricDecl{std::vector<std::string>(w.begin() + 1, w.end()), l.number};
  }

  for (auto& [header, body] : task_sections) {
    ManifestTask task;
    task.name = words(header.text.substr(1, header.text.size() - 2))[1];
    task.line = header.number;
    declare(task.name, header.number);
    for (const auto& l : body) {
      auto [k, v] = key_value(l);
      if (k == "op") {
        if (!task.op.empty()) throw ManifestError("op given twice", l.number);
        task.op = v;
      } else if (k == "expect") {
        std::string err = detail::expectation_syntax_error(v);
        if (!err.empty()) throw ManifestError(err, l.number);
        task.expects.emplace_back(v, l.number);
      } else if (!policy_key(task.policy, k, v, l.number)) {
        if (task.arg(k)) throw ManifestError("argument '" + k + "' given twice", l.number);
        task.args.emplace_back(k, v);
      }
    }
    if (task.op.empty()) throw ManifestError("task '" + task.name + "' has no op", header.number);
    const detail::OpSpec* spec = detail::find_op(task.op);
    if (!spec) throw ManifestError("unknown op '" + task.op + "'", header.number);
    for (const auto& r : spec->required)
      if (!task.arg(r)) throw ManifestError("op " + task.op + " needs '" + r + "'", header.number);
    for (const auto& [k, v] : task.args)
      if (std::find(spec->required.begin(), spec->required.end(), k) == spec->required.end() &&
          std::find(spec->optional.begin(), spec->optional.end(), k) == spec->optional.end())
        throw ManifestError("op " + task.op + " takes no argument '" + k + "'", header.number);
    m.tasks.push_back(std::move(task));
  }
  return m;
}

Manifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ManifestError("cannot read '" + path + "'", 0);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_manifest(buf.str(), path);
}

// ---- catalog emission

namespace {

std::string rational_suffix(const Rational& q) {
  std::string s = q.get_str();
  for (auto& c : s) {
    if (c == '-') c = 'm';
    if (c == '/') c = 'o';
  }
  return s;
}

std::string lie_field(const Space& space, const LieVector& v) {
  std::vector<Expr> comps;
  for (const auto& q : v) comps.push_back(Expr::rational(q));
  return to_string(VectorField(space, comps));
}

}  // namespace

std::string manifest_name(const Geometry& g) {
  Geometry defaults = geometry(g.key);
  std::string name = g.key;
  if (defaults.params != g.params) {
    std::string last;
    for (const auto& [k, v] : g.params) {
      // sol_mn stores c1, c2, c3; the suffix names the family once
      std::string family = k;
      while (!family.empty() && std::isdigit(static_cast<unsigned char>(family.back()))) family.pop_back();
      if (family != last) name += "_" + family;
      last = family;
      name += "_" + rational_suffix(v);
    }
  }
  return name;
}

std::string catalog_manifest(const CatalogRow& row) {
  const Geometry& g = row.geometry;
  const LieAlgebra4& l = g.algebra;
  Space space = lie_space(l);
  std::ostringstream out;
  out << "engelkit-manifest 1\n";
  out << "# " << g.title;
  for (const auto& [k, v] : g.params) out << ", " << k << " = " << v.get_str();
  out << "\n";
  if (!g.metadata.empty()) out << "# " << g.metadata << "\n";
  for (const auto& [c, ok] : g.constraints) out << "# constraint " << c << ": " << (ok ? "holds" : "fails") << "\n";
  out << "name = " << manifest_name(g) << "\n\n[space]\n";
  for (const auto& d : space->directions()) out << "lie " << d.name << " " << d.coframe << "\n";
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      LieVector v = l.structure[i][j];
      if (v == LieVector{}) continue;
      out << "bracket " << l.generators[i] << " " << l.generators[j] << " = " << lie_field(space, v) << "\n";
    }
  out << "\n[fields]\n";
  out << "W = " << lie_field(space, g.W) << "\n";
  out << "X = " << lie_field(space, g.X) << "\n";

  out << "\n[task jacobi]\nop = jacobi_check\nexpect = " << (row.jacobi.holds() ? "pass" : "fail") << "\n";
  out << "\n[task search]\nop = framing_search\nW = W\nX = X\n";
  if (!row.search) {
    out << "expect = error\n";
    return out.str();
  }
  const FramingSearch& f = *row.search;
  out << "expect = " << (f.found() ? "framing" : "no_framing") << "\n";
  out << "expect = commutant_dim " << f.commutant.size() << "\n";
  out << "expect = Y == " << lie_field(space, f.Y) << "\n";
  if (!f.found()) return out.str();
  out << "expect = R == " << lie_field(space, *f.R) << "\n";
  bool positive = row.positive();
  out << "\n[task export]\nop = framing_export\nsearch = search\nexpect = " << (positive ? "pass" : "fail")
      << "\n";
  if (!positive) return out.str();
  out << "expect = exact\n";
  out << "\n[task identities]\nop = jacobi_identities\ndata = export\nexpect = pass\nexpect = exact\n";
  out << "\n[task invariants]\nop = kengel_invariants\ndata = export\nZ = export.Z\nexpect = pass\nexpect = exact\n";
  out << "\n[task contact]\nop = contact_reeb\ndata = export\nexpect = pass\n";
  out << "\n[task geodesic_r]\nop = totally_geodesic\ndata = export\nmetric = export.g\ndistribution = R\n"
         "expect = fail\n";
  return out.str();
}

std::string catalog_table(const std::vector<CatalogRow>& rows) {
  std::ostringstream out;
  for (const auto& row : rows) {
    const Geometry& g = row.geometry;
    const LieAlgebra4& l = g.algebra;
    out << (row.positive() ? "+ " : "- ") << g.title;
    for (const auto& [k, v] : g.params) out << "  " << k << "=" << v.get_str();
    out << "\n";
    out << "    jacobi: " << (row.jacobi.holds() ? "exact" : "VIOLATED") << "\n";
    for (const auto& [c, ok] : g.constraints) out << "    constraint " << c << ": " << (ok ? "holds" : "fails") << "\n";
    out << "    W = " << to_string(l, g.W) << ", X = " << to_string(l, g.X) << "\n";
    if (!row.search) {
      out << "    rejected: " << row.rejected << "\n";
    } else {
      const FramingSearch& f = *row.search;
      out << "    Y = " << to_string(l, f.Y) << "\n";
      out << "    commutant:";
      if (f.commutant.empty()) out << " {0}";
      for (const auto& z : f.commutant) out << " " << to_string(l, z);
      out << "\n";
      if (f.found()) {
        out << "    R = " << to_string(l, *f.R) << "\n";
        if (row.exported)
          out << "    K-Engel check: " << (row.exported->holds() ? "holds" : "fails")
              << (row.exported->exact ? " (exact)" : "") << "\n";
      } else {
        out << "    no framing: det(W, X, Y, z) =";
        for (const auto& d : f.transversality) out << " " << d.get_str();
        if (f.transversality.empty()) out << " (empty commutant)";
        out << "\n";
      }
    }
    out << "    expected " << (g.expected_positive ? "+" : "-") << ", " << (row.agrees() ? "agrees" : "DISAGREES")
        << "\n";
  }
  return out.str();
}

}  // namespace engelkit
