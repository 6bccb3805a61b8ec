#ifndef CAUSALAB_RUN_HPP
#define CAUSALAB_RUN_HPP

#include <cstdint>
#include <json.hpp>
#include <string>
#include <utility>
#include <vector>

#include "causalab/errors.hpp"

namespace causalab::run {

struct RunConfig {
  std::string command;
  nlohmann::json params;  // flat command-specific keys
  std::string output_dir = ".";
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string plot_kind;  // empty: no plot
  void validate() const;
};

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, std::string>> metadata;
  void validate() const;  // rectangular, finite cells
};

struct RunOutcome {
  ResultTable table;
  nlohmann::json summary;
  int property_failures = 0;  // nonzero maps to exit code 4
};

/// Dispatches a validated config to its command implementation.
RunOutcome execute(const RunConfig& config);

/// Shortest round-trip decimal formatting of a 64-bit float.
std::string format_double(double v);

/// Deterministic CSV body: header plus data rows (no metadata lines).
std::string csv_body(const ResultTable& table);

/// Full CSV: '#'-prefixed metadata lines followed by the body.
std::string csv_text(const ResultTable& table);

void write_file(const std::string& path, const std::string& text);

/// FNV-1a over the canonical (sorted-key) parameter dump.
std::uint64_t config_hash(const RunConfig& config);

std::vector<std::string> known_commands();

/// argv-level entry point used by the causalab binary; returns the exit code
/// (0 ok, 2 validation, 3 non-convergence, 4 property failure).
int run_cli(int argc, char** argv);

}  // namespace causalab::run

#endif
