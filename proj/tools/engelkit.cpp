#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "engelkit/manifest.hpp"

using namespace engelkit;

namespace {

int run_command(const std::string& path, const RunOptions& options, const std::string& machine_out) {
  RunReport report;
  try {
    report = run_manifest(load_manifest(path), options);
  } catch (const ManifestError& e) {
    report = parse_error_report(path, e.what());
  }
  std::cout << human_report(report);
  if (!report.fatal.empty()) std::cerr << path << ": " << report.fatal << "\n";
  if (!machine_out.empty()) {
    std::ofstream out(machine_out, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << machine_out << "\n";
      return 2;
    }
    out << machine_report(report);
  }
  return report.exit_code();
}

// "c=1,0,-1" -> {"c", {1, 0, -1}}
std::pair<std::string, std::vector<Rational>> parse_param(const std::string& text) {
  auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw Error("expected NAME=V1[,V2...], got '" + text + "'");
  std::vector<Rational> values;
  std::stringstream in(text.substr(eq + 1));
  for (std::string item; std::getline(in, item, ',');) {
    try {
      Rational q(item);
      q.canonicalize();
      values.push_back(q);
    } catch (const std::exception&) {
      throw Error("bad rational '" + item + "' in '" + text + "'");
    }
  }
  if (values.empty()) throw Error("no values in '" + text + "'");
  return {text.substr(0, eq), values};
}

int catalog_command(const std::string& key, const std::vector<std::string>& params, bool emit,
                    const std::string& output) {
  std::vector<CatalogRow> rows;
  try {
    if (key.empty()) {
      if (!params.empty()) throw Error("--params needs --geometry");
      rows = catalog_run();
    } else {
      std::map<std::string, std::vector<Rational>> values;
      for (const auto& p : params) values.insert(parse_param(p));
      rows.push_back(catalog_row(geometry(key, values)));
    }
  } catch (const Error& e) {
    std::cerr << "catalog: " << e.what() << "\n";
    return 2;
  }
  if (!emit) {
    std::cout << catalog_table(rows);
    for (const auto& r : rows)
      if (!r.agrees()) return 1;
    return 0;
  }
  if (rows.size() == 1 && !(std::filesystem::is_directory(output))) {
    if (output.empty()) {
      std::cout << catalog_manifest(rows[0]);
      return 0;
    }
    std::ofstream out(output, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << output << "\n";
      return 2;
    }
    out << catalog_manifest(rows[0]);
    return 0;
  }
  if (output.empty() || !std::filesystem::is_directory(output)) {
    std::cerr << "catalog: emitting every geometry needs --output DIR\n";
    return 2;
  }
  for (const auto& r : rows) {
    auto file = std::filesystem::path(output) / (manifest_name(r.geometry) + ".manifest");
    std::ofstream out(file, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << file << "\n";
      return 2;
    }
    out << catalog_manifest(r);
    std::cout << file.string() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"engelkit: Engel and K-Engel structure verification"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run the tasks of a manifest and check their expectations");
  std::string manifest, machine_out;
  std::uint64_t seed = 0;
  int samples = 0;
  double tol = 0;
  run->add_option("manifest", manifest, "manifest file")->required();
  auto* seed_opt = run->add_option("--seed", seed, "sampling seed for every task");
  auto* samples_opt = run->add_option("--samples", samples, "sample count for every task")->check(CLI::PositiveNumber);
  auto* tol_opt = run->add_option("--tol", tol, "absolute zero tolerance for every task")->check(CLI::PositiveNumber);
  run->add_option("--machine-out", machine_out, "write the key-value report to FILE");

  auto* catalog = app.add_subcommand("catalog", "geometry catalog: framing search and K-Engel check");
  std::string key, output;
  std::vector<std::string> params;
  bool emit = false;
  catalog->add_option("--geometry", key, "one of s3xr, sl2xr, nil3xr, sol_mn, sol0, sol1, nil4");
  catalog->add_option("--params", params, "parameter values, e.g. c=1,0,-1 or k=-1")->expected(1, -1);
  catalog->add_flag("--emit-manifest", emit, "print a manifest instead of the table");
  catalog->add_option("--output", output, "manifest file, or directory when emitting every geometry");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (run->parsed()) {
    RunOptions options;
    if (*seed_opt) options.seed = seed;
    if (*samples_opt) options.samples = samples;
    if (*tol_opt) options.tol = tol;
    return run_command(manifest, options, machine_out);
  }
  return catalog_command(key, params, emit, output);
}
