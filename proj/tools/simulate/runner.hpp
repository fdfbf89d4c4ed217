#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "config.hpp"

namespace simulate {

enum ExitCode { kExitOk = 0, kExitError = 1, kExitConfig = 2, kExitNumerical = 3 };

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunResult {
  std::string name;
  std::string label;  // step circuit label
  std::vector<std::string> observables;
  std::vector<std::vector<double>> values;  // [observable][step]
  std::vector<double> trace;
  std::vector<double> purity;
  std::vector<bool> monotone;  // per observable
  std::string circuit;         // dump text
  std::string resources;       // key=value report
};

// Builds and runs one RunSpec through the C API. Throws ConfigError for
// settings the library rejects and NumericalError for invariant violations.
RunResult execute_run(const ExperimentConfig& cfg, const RunSpec& run);

// Runs every RunSpec (concurrently), writes the requested files and prints a
// summary and the resource table to `out`. Returns an ExitCode.
int run_experiment(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);

// `base` unchanged for a single run, else "name-suffix.ext".
std::string output_path(const std::string& base, const std::string& suffix, bool multi);

std::string render_csv(const RunResult& r);
std::string render_svg(const RunResult& r, const std::string& title);
std::string render_resource_table(const std::vector<std::string>& names,
                                  const std::vector<std::string>& reports);
// Sequential vs direct-dilation qubit and gate counts for Kraus ranks
// l = 2, 4, 8, 16 of a Pauli mixture.
std::string rank_comparison_table();

// Writes to a temporary sibling file and renames it over `path`.
void write_atomic(const std::string& path, const std::string& content);

// Full command-line entry point; returns the process exit code.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace simulate
