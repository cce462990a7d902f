#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sphu/asymptotics.hpp"
#include "sphu/variance_engine.hpp"
#include "sphu/wavelet_families.hpp"

namespace sphu::cli {

enum class Command { Lemma, Uncertainty, Sweep, OracleCheck, Presets };
enum class Format { Csv, Json };

Command parse_command(const std::string& name);
std::string command_name(Command c);

/// Validated run configuration. Built from a flat JSON object whose keys
/// are documented in the README; unknown keys and keys that the command
/// does not use are rejected.
struct RunConfig {
  Command command = Command::Presets;
  std::optional<Family> family;
  int n = 2;
  std::optional<double> rho;
  std::optional<std::vector<double>> rho_grid;
  std::optional<LemmaParams> lemma;
  EngineOptions engine;
  double oracle_tol = 1e-8;
  double slope_tol = 0.05;
  double variation_tol = 0.05;
  unsigned threads = 0;
  std::string output = "-";
  Format format = Format::Csv;
};

RunConfig parse_config(const nlohmann::json& config);

/// Parses JSON, falling back to a relaxed form in which object keys may be
/// left unquoted: {a:1,c:1,q:[0,1],n:2}.
nlohmann::json parse_relaxed_json(const std::string& text);

nlohmann::json load_config_file(const std::string& path);

/// Runs the command and returns the exit status: 0 success, 2 when a
/// numerical failure or a failed check is recorded in the output.
/// Output goes to config.output, or to `out` when that is "-"; the sweep
/// summary goes next to the output file, or to `err` on stdout runs.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full entry point: parse, run and map errors to exit statuses
/// (1 for validation errors, 2 for numerical ones).
int run_json(const nlohmann::json& config, std::ostream& out, std::ostream& err);

/// Writes `content` to `path` through a temporary file and a rename, so the
/// file is either complete or absent.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace sphu::cli
