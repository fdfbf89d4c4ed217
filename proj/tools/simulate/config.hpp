#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace simulate {

// Invalid configuration. The message starts with the origin of the offending
// value ("file.ini:12: " or "--theta: ") followed by the field name.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ChannelKind { kAmplitudeDamping, kDephasing, kPauli, kCustomFile };
enum class Mode { kMarkovian, kNonMarkovian, kSequential };

std::string_view to_string(ChannelKind kind);
std::string_view to_string(Mode mode);

struct RunSpec {
  Mode mode = Mode::kMarkovian;
  std::optional<double> theta;  // markovian
  std::vector<double> thetas;   // non-markovian, or sequential memory
  int k = 1;
  std::string name;             // suffix for output files of multi-run configs
};

struct InitialState {
  std::string named;            // "0", "1", "+", "-"; empty for explicit
  int dim = 0;                  // explicit matrix only
  std::vector<double> re_im;    // row-major interleaved
};

struct ExperimentConfig {
  std::string preset;
  ChannelKind channel = ChannelKind::kAmplitudeDamping;
  double px = 0.0, py = 0.0, pz = 0.0;
  std::string channel_file;
  int steps = 0;
  InitialState initial;
  std::vector<std::string> observables;
  std::string csv;
  std::string svg;
  std::string circuit;
  std::vector<RunSpec> runs;
};

// One raw `key = value` assignment and where it came from.
struct Entry {
  std::string value;
  std::string origin;
};

// Keys grouped as "section.key", e.g. "experiment.theta", "output.csv".
using RawConfig = std::map<std::string, Entry>;

// Reads the INI-style text. Unknown sections and keys, duplicates and
// malformed lines are rejected with the line number.
RawConfig parse_config_text(std::string_view text, const std::string& source);
RawConfig read_config_file(const std::string& path);

// Validates and fills documented defaults.
ExperimentConfig build_config(const RawConfig& raw);
ExperimentConfig parse_config(const std::string& path);

// `pi/10`, `2*pi/3`, `2pi/3`, `pi`, or a decimal.
double parse_angle(std::string_view text);
std::vector<double> parse_angle_list(std::string_view text);

// `[a b; c d]` with real or complex entries such as `0.5-0.5i`.
InitialState parse_matrix(std::string_view text);

std::vector<std::string> preset_names();

}  // namespace simulate
