#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "runner.hpp"

namespace simulate {

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Density-matrix simulation of Markovian and non-Markovian qubit dynamics"};
  app.set_version_flag("--version", "simulate 0.1.0");

  std::string config_path;
  bool resource_table = false;
  // flag name -> config key
  const std::vector<std::pair<std::string, std::string>> flags = {
      {"preset", "experiment.preset"},
      {"channel", "experiment.channel"},
      {"mode", "experiment.mode"},
      {"theta", "experiment.theta"},
      {"thetas", "experiment.thetas"},
      {"k", "experiment.k"},
      {"steps", "experiment.steps"},
      {"initial", "experiment.initial"},
      {"observables", "experiment.observables"},
      {"px", "experiment.px"},
      {"py", "experiment.py"},
      {"pz", "experiment.pz"},
      {"channel-file", "experiment.channel_file"},
      {"csv", "output.csv"},
      {"svg", "output.svg"},
      {"dump-circuit", "output.circuit"},
  };
  const std::map<std::string, std::string> help = {
      {"preset", "fig6, fig7 or fig8"},
      {"channel", "amplitude-damping, dephasing, pauli or custom-file"},
      {"mode", "markovian, non-markovian or sequential"},
      {"theta", "rotation angle, e.g. pi/10"},
      {"thetas", "comma-separated memory angles, e.g. pi/10,2pi/3,5pi/6"},
      {"k", "memory order (must equal the number of thetas)"},
      {"steps", "number of steps T"},
      {"initial", "0, 1, +, - or a matrix such as [0.5 0.5; 0.5 0.5]"},
      {"observables", "comma-separated: p0, p1, plus, minus"},
      {"px", "Pauli X probability"},
      {"py", "Pauli Y probability"},
      {"pz", "Pauli Z probability"},
      {"channel-file", "JSON Kraus channel specification"},
      {"csv", "trajectory CSV path"},
      {"svg", "SVG plot path"},
      {"dump-circuit", "step circuit dump path"},
  };
  std::map<std::string, std::string> values;
  app.add_option("--config", config_path, "INI-style experiment file");
  for (const auto& [flag, key] : flags) {
    app.add_option("--" + flag, values[flag], help.at(flag));
  }
  app.add_flag("--resource-table", resource_table,
               "print the sequential vs direct-dilation comparison for l = 2, 4, 8, 16");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    out << e.what() << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  RawConfig raw;
  try {
    if (!config_path.empty()) raw = read_config_file(config_path);
    for (const auto& [flag, key] : flags) {
      if (app.count("--" + flag) > 0) raw[key] = {values[flag], "--" + flag};
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  int code = kExitOk;
  if (!raw.empty() || !resource_table) {
    ExperimentConfig cfg;
    try {
      cfg = build_config(raw);
    } catch (const ConfigError& e) {
      err << "config error: " << e.what() << "\n";
      return kExitConfig;
    }
    code = run_experiment(cfg, out, err);
  }
  if (resource_table && code == kExitOk) {
    try {
      out << "\n" << rank_comparison_table();
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kExitError;
    }
  }
  return code;
}

}  // namespace simulate
