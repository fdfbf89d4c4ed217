#include "runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <map>
#include <memory>
#include <sstream>

#include "oqs/oqs.h"

namespace simulate {
namespace {

struct Handles {
  oqs_channel* channel = nullptr;
  oqs_step* step = nullptr;
  oqs_state* state = nullptr;
  oqs_trajectory* traj = nullptr;

  Handles() = default;
  Handles(const Handles&) = delete;
  Handles& operator=(const Handles&) = delete;
  ~Handles() {
    oqs_trajectory_destroy(traj);
    oqs_state_destroy(state);
    oqs_step_destroy(step);
    oqs_channel_destroy(channel);
  }
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// Setup failures become config errors naming the field that caused them.
void expect_ok(oqs_status s, std::string_view field) {
  if (s == OQS_OK) return;
  const std::string msg = std::string(field) + ": " + oqs_last_error();
  if (s == OQS_ERR_INTERNAL) throw std::runtime_error(msg);
  throw ConfigError("config: " + msg);
}

std::map<std::string, std::string> parse_report(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

std::string format_report(const oqs_resource_report& r) {
  char* text = nullptr;
  if (oqs_resource_report_format(&r, &text) != OQS_OK) {
    throw std::runtime_error(oqs_last_error());
  }
  std::string out(text);
  oqs_string_free(text);
  return out;
}

std::string table(const std::vector<std::string>& header,
                  const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::ostringstream out;
  auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c + 1 < row.size(); ++c) {
      out << std::left << std::setw(static_cast<int>(width[c])) << row[c] << "  ";
    }
    out << row.back() << "\n";
  };
  emit(header);
  for (const auto& row : rows) emit(row);
  return out.str();
}

}  // namespace

RunResult execute_run(const ExperimentConfig& cfg, const RunSpec& run) {
  Handles h;
  RunResult result;
  result.name = run.name;
  int rank = 2;

  if (run.mode == Mode::kSequential) {
    if (cfg.channel == ChannelKind::kPauli) {
      expect_ok(oqs_channel_pauli(cfg.px, cfg.py, cfg.pz, &h.channel), "px/py/pz");
    } else {
      expect_ok(oqs_channel_from_file(cfg.channel_file.c_str(), &h.channel), "channel_file");
    }
    rank = static_cast<int>(oqs_channel_rank(h.channel));
    expect_ok(oqs_step_sequential(h.channel, run.thetas.empty() ? nullptr : run.thetas.data(),
                                  static_cast<int>(run.thetas.size()), &h.step),
              "channel");
  } else {
    const oqs_damping_kind kind = cfg.channel == ChannelKind::kAmplitudeDamping
                                      ? OQS_AMPLITUDE_DAMPING
                                      : OQS_DEPHASING;
    const double theta = run.mode == Mode::kMarkovian ? *run.theta : run.thetas[0];
    const double gamma = std::sin(theta / 2);
    expect_ok(kind == OQS_AMPLITUDE_DAMPING ? oqs_channel_amplitude_damping(gamma, &h.channel)
                                            : oqs_channel_dephasing(gamma, &h.channel),
              "theta");
    rank = static_cast<int>(oqs_channel_rank(h.channel));
    if (run.mode == Mode::kMarkovian) {
      expect_ok(oqs_step_markovian(kind, theta, &h.step), "theta");
    } else {
      expect_ok(oqs_step_nonmarkovian(kind, run.thetas.data(),
                                      static_cast<int>(run.thetas.size()), &h.step),
                "thetas");
    }
  }

  if (cfg.initial.named.empty()) {
    expect_ok(oqs_state_from_matrix(cfg.initial.dim, cfg.initial.re_im.data(), &h.state),
              "initial");
  } else {
    expect_ok(oqs_state_named(cfg.initial.named.c_str(), &h.state), "initial");
  }

  std::vector<const char*> names;
  for (const auto& o : cfg.observables) names.push_back(o.c_str());
  const oqs_status s =
      oqs_run(h.step, h.state, cfg.steps, names.data(), names.size(), &h.traj);
  if (s == OQS_ERR_NUMERICAL) {
    throw NumericalError("run " + run.name + ": numerical violation: invariant '" +
                         oqs_last_violation_invariant() + "' violated at step " +
                         std::to_string(oqs_last_violation_step()));
  }
  if (s == OQS_ERR_DIMENSION_MISMATCH) expect_ok(s, "initial");
  expect_ok(s, "run");

  const std::size_t len = oqs_trajectory_length(h.traj);
  result.observables = cfg.observables;
  result.values.assign(names.size(), std::vector<double>(len));
  for (std::size_t n = 0; n < len; ++n) {
    oqs_record rec;
    expect_ok(oqs_trajectory_record(h.traj, n, &rec), "run");
    result.trace.push_back(rec.trace);
    result.purity.push_back(rec.purity);
    for (std::size_t o = 0; o < names.size(); ++o) {
      expect_ok(oqs_trajectory_value(h.traj, n, o, &result.values[o][n]), "run");
    }
  }
  for (const char* name : names) {
    oqs_monotonicity m;
    expect_ok(oqs_monotonicity_check(h.traj, name, 1e-9, &m), "run");
    result.monotone.push_back(m.monotone != 0);
  }

  char* text = nullptr;
  expect_ok(oqs_step_dump(h.step, &text), "circuit");
  result.circuit = text;
  oqs_string_free(text);
  result.label = result.circuit.substr(5, result.circuit.find('\n') - 5);

  const bool sequential = run.mode == Mode::kSequential;
  const int k = run.thetas.empty() ? 1 : static_cast<int>(run.thetas.size());
  oqs_resource_report report;
  expect_ok(oqs_resource_count(h.step, cfg.steps, sequential ? OQS_SEQUENTIAL : OQS_DIRECT_DILATION,
                               k, rank, &report),
            "resources");
  result.resources = format_report(report);
  return result;
}

std::string output_path(const std::string& base, const std::string& suffix, bool multi) {
  if (!multi) return base;
  const std::filesystem::path p(base);
  std::filesystem::path out = p.parent_path() / (p.stem().string() + "-" + suffix);
  out += p.extension();
  return out.string();
}

std::string render_csv(const RunResult& r) {
  std::string out = "step,observable,value,trace,purity\n";
  for (std::size_t n = 0; n < r.trace.size(); ++n) {
    for (std::size_t o = 0; o < r.observables.size(); ++o) {
      out += std::to_string(n) + "," + r.observables[o] + "," + fmt(r.values[o][n]) + "," +
             fmt(r.trace[n]) + "," + fmt(r.purity[n]) + "\n";
    }
  }
  return out;
}

std::string render_svg(const RunResult& r, const std::string& title) {
  constexpr double W = 640, H = 400, L = 60, R = 20, T = 40, B = 50;
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  const std::size_t steps = r.trace.empty() ? 0 : r.trace.size() - 1;
  const double span = steps == 0 ? 1.0 : static_cast<double>(steps);
  auto x = [&](double n) { return L + (W - L - R) * n / span; };
  auto y = [&](double v) { return H - B - (H - T - B) * std::clamp(v, 0.0, 1.0); };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" "
         "viewBox=\"0 0 640 400\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
  out << "<text x=\"320\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title
      << "</text>\n";
  out << "<line x1=\"" << coord(L) << "\" y1=\"" << coord(H - B) << "\" x2=\"" << coord(W - R)
      << "\" y2=\"" << coord(H - B) << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << coord(L) << "\" y1=\"" << coord(T) << "\" x2=\"" << coord(L)
      << "\" y2=\"" << coord(H - B) << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double v = i / 4.0;
    out << "<text x=\"" << coord(L - 8) << "\" y=\"" << coord(y(v) + 4)
        << "\" text-anchor=\"end\">" << coord(v) << "</text>\n";
    const double n = span * i / 4.0;
    out << "<text x=\"" << coord(x(n)) << "\" y=\"" << coord(H - B + 18)
        << "\" text-anchor=\"middle\">" << static_cast<long>(std::lround(n)) << "</text>\n";
  }
  out << "<text x=\"" << coord((L + W - R) / 2) << "\" y=\"" << coord(H - 12)
      << "\" text-anchor=\"middle\">step</text>\n";
  for (std::size_t o = 0; o < r.observables.size(); ++o) {
    const char* color = kColors[o % 4];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t n = 0; n < r.values[o].size(); ++n) {
      out << (n ? " " : "") << coord(x(static_cast<double>(n))) << "," << coord(y(r.values[o][n]));
    }
    out << "\"/>\n";
    const double ly = T + 16.0 * o;
    out << "<line x1=\"" << coord(W - R - 110) << "\" y1=\"" << coord(ly) << "\" x2=\""
        << coord(W - R - 90) << "\" y2=\"" << coord(ly) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << coord(W - R - 84) << "\" y=\"" << coord(ly + 4) << "\">"
        << r.observables[o] << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string render_resource_table(const std::vector<std::string>& names,
                                  const std::vector<std::string>& reports) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    auto kv = parse_report(reports[i]);
    rows.push_back({names[i], kv["method"], kv["k"], kv["l"], kv["qubit_count"],
                    kv["layout_qubits"], kv["gates_per_step"],
                    kv["gates_per_step_without_resets"], kv["total_gates"],
                    kv["total_gates_without_resets"]});
  }
  return table({"run", "method", "k", "l", "qubits", "layout_qubits", "gates/step",
                "gates/step(no reset)", "total_gates", "total_gates(no reset)"},
               rows);
}

std::string rank_comparison_table() {
  std::vector<std::vector<std::string>> rows;
  for (int l : {2, 4, 8, 16}) {
    oqs_channel* ch = nullptr;
    oqs_step* step = nullptr;
    if (oqs_channel_pauli_mixture(l, 0.01, &ch) != OQS_OK ||
        oqs_step_sequential(ch, nullptr, 0, &step) != OQS_OK) {
      const std::string msg = oqs_last_error();
      oqs_channel_destroy(ch);
      throw std::runtime_error(msg);
    }
    oqs_resource_report seq, direct;
    const oqs_status a = oqs_resource_count(step, 1, OQS_SEQUENTIAL, 1, l, &seq);
    const oqs_status b = oqs_resource_count(step, 1, OQS_DIRECT_DILATION, 1, l, &direct);
    oqs_step_destroy(step);
    oqs_channel_destroy(ch);
    if (a != OQS_OK || b != OQS_OK) throw std::runtime_error(oqs_last_error());
    auto s = parse_report(format_report(seq));
    auto d = parse_report(format_report(direct));
    rows.push_back({std::to_string(l), s["qubit_count"], s["environment_qubits"],
                    s["gates_per_step"], s["gates_per_step_without_resets"], d["qubit_count"],
                    d["environment_qubits"]});
  }
  return table({"l", "sequential_qubits", "sequential_env", "sequential_gates/step",
                "sequential_gates/step(no reset)", "direct_qubits", "direct_env"},
               rows);
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.close();
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

int run_experiment(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<std::future<RunResult>> pending;
  for (const auto& run : cfg.runs) {
    pending.push_back(std::async(std::launch::async, [&cfg, &run] { return execute_run(cfg, run); }));
  }
  std::vector<RunResult> results;
  int code = kExitOk;
  for (auto& f : pending) {
    try {
      results.push_back(f.get());
    } catch (const ConfigError& e) {
      if (code == kExitOk) err << "config error: " << e.what() << "\n";
      code = code == kExitOk ? kExitConfig : code;
    } catch (const NumericalError& e) {
      if (code == kExitOk) err << e.what() << "\n";
      code = code == kExitOk ? kExitNumerical : code;
    } catch (const std::exception& e) {
      if (code == kExitOk) err << "error: " << e.what() << "\n";
      code = code == kExitOk ? kExitError : code;
    }
  }
  if (code != kExitOk) return code;

  const bool multi = results.size() > 1;
  const std::string title_prefix = cfg.preset.empty() ? "" : cfg.preset + ": ";
  std::vector<std::string> names, reports;
  try {
    for (const auto& r : results) {
      const std::string csv = output_path(cfg.csv, r.name, multi);
      write_atomic(csv, render_csv(r));
      out << "run " << r.name << " (" << r.label << "), T=" << cfg.steps;
      for (std::size_t o = 0; o < r.observables.size(); ++o) {
        out << ", final " << r.observables[o] << "=" << fmt(r.values[o].back())
            << (r.monotone[o] ? " monotone" : " non-monotone");
      }
      out << "\n  csv: " << csv << "\n";
      if (!cfg.svg.empty()) {
        const std::string svg = output_path(cfg.svg, r.name, multi);
        write_atomic(svg, render_svg(r, title_prefix + r.label));
        out << "  svg: " << svg << "\n";
      }
      if (!cfg.circuit.empty()) {
        const std::string path = output_path(cfg.circuit, r.name, multi);
        write_atomic(path, r.circuit);
        out << "  circuit: " << path << "\n";
      }
      names.push_back(r.name);
      reports.push_back(r.resources);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  out << "\n" << render_resource_table(names, reports);
  return kExitOk;
}

}  // namespace simulate
