#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "engelkit/catalog.hpp"
#include "engelkit/error.hpp"
#include "engelkit/frame.hpp"

namespace engelkit {

// Malformed manifest text or a reference that does not resolve. `line` is
// 1-based, 0 when unknown.
class ManifestError : public Error {
 public:
  ManifestError(const std::string& message, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct PolicyOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  std::optional<double> tol;
  std::optional<bool> reduce_trig;
  void apply(SamplingPolicy& p) const;
};

struct ManifestTask {
  std::string name;
  std::string op;
  int line = 0;
  std::vector<std::pair<std::string, std::string>> args;  // file order
  std::vector<std::pair<std::string, int>> expects;       // text, line
  PolicyOverrides policy;
  const std::string* arg(std::string_view key) const;
};

// `orthonormal F1 F2 ...` over field references, resolved when a task uses it.
struct MetricDecl {
  std::vector<std::string> fields;
  int line = 0;
};

struct Manifest {
  std::string name;
  std::string source;
  Space space;  // null without a [space] section
  std::map<std::string, Expr> bindings;  // rational parameter values
  PolicyOverrides policy;
  std::map<std::string, DiffForm> forms;
  std::map<std::string, VectorField> fields;
  std::map<std::string, MetricDecl> metrics;
  std::vector<ManifestTask> tasks;
};

// Grammar in docs/manifest.md. Throws ManifestError.
Manifest parse_manifest(std::string_view text, std::string source = "<memory>");
Manifest load_manifest(const std::string& path);

std::vector<std::string> manifest_operations();

// Literals in the printed syntax: "-sin(2*pi*t)*@x + @z", "dz - x*dy".
// Every term must be linear in the basis tokens. Throws ManifestError.
VectorField parse_field(std::string_view text, const Space& space,
                        const std::map<std::string, Expr>& bindings = {});
DiffForm parse_one_form(std::string_view text, const Space& space,
                        const std::map<std::string, Expr>& bindings = {});

// ---- running

struct VerdictLine {
  std::string name;
  std::string kind;  // ExactZero, SampledZero, Nonzero, Nonvanishing, Vanishing
  double value = 0.0;  // max |.| for zero tests, min |.| for nonvanishing tests
  bool holds = true;
  std::optional<Witness> witness;
};

struct ExpectationResult {
  std::string text;
  bool met = false;
  std::string detail;
};

struct TaskResult {
  std::string name;
  std::string op;
  SamplingPolicy policy;
  std::string error;  // Error text when the operation threw
  bool passed = false;
  std::vector<VerdictLine> verdicts;
  std::vector<std::pair<std::string, std::string>> objects;  // printed
  std::vector<ExpectationResult> expectations;
  double seconds = 0.0;
  bool matched() const;
};

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  std::optional<double> tol;
};

struct RunReport {
  std::string manifest;
  std::string source;
  std::vector<TaskResult> tasks;
  std::string fatal;  // reference error that stopped the run
  int mismatches() const;
  // 0 all expectations met, 1 some mismatch, 2 parse or reference error
  int exit_code() const;
};

// Tasks run in file order; later tasks see the objects of earlier ones as
// "task" and "task.name". Command-line options override task policy, which
// overrides the [policy] section.
RunReport run_manifest(const Manifest& m, const RunOptions& options = {});
RunReport parse_error_report(const std::string& source, const std::string& message);

std::string human_report(const RunReport& r);
// Key-value text, stable order, no timing; grammar in docs/report.md.
std::string machine_report(const RunReport& r);

// ---- catalog front end

// Key plus a parameter suffix when the parameters differ from the defaults,
// e.g. "nil4", "sol_mn_c_1_0_m1".
std::string manifest_name(const Geometry& g);
std::string catalog_manifest(const CatalogRow& row);
std::string catalog_table(const std::vector<CatalogRow>& rows);

}  // namespace engelkit
