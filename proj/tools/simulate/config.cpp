#include "config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace simulate {
namespace {

constexpr double kPi = 3.14159265358979323846;

const std::map<std::string, std::set<std::string>> kKeys = {
    {"experiment",
     {"preset", "channel", "mode", "theta", "thetas", "k", "steps", "initial",
      "observables", "px", "py", "pz", "channel_file"}},
    {"output", {"csv", "svg", "circuit"}},
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::optional<double> to_number(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::optional<int> to_int(std::string_view s) {
  s = trim(s);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::pair<double, double> parse_complex(std::string_view tok) {
  const std::string bad = "bad matrix entry '" + std::string(tok) + "'";
  if (tok.empty() || tok.back() != 'i') {
    const auto re = to_number(tok);
    if (!re) throw std::invalid_argument(bad);
    return {*re, 0.0};
  }
  std::string_view body = tok.substr(0, tok.size() - 1);
  std::size_t split_at = std::string_view::npos;
  for (std::size_t p = body.size(); p-- > 1;) {
    if ((body[p] == '+' || body[p] == '-') && body[p - 1] != 'e' && body[p - 1] != 'E') {
      split_at = p;
      break;
    }
  }
  double re = 0.0;
  std::string_view im_text = body;
  if (split_at != std::string_view::npos) {
    const auto r = to_number(body.substr(0, split_at));
    if (!r) throw std::invalid_argument(bad);
    re = *r;
    im_text = body.substr(split_at);
  }
  double im = 0.0;
  if (im_text.empty() || im_text == "+") {
    im = 1.0;
  } else if (im_text == "-") {
    im = -1.0;
  } else {
    const auto v = to_number(im_text);
    if (!v) throw std::invalid_argument(bad);
    im = *v;
  }
  return {re, im};
}

struct Preset {
  ChannelKind channel;
  int steps;
  std::string initial;
  std::string observable;
  double theta;
  std::vector<double> thetas;
};

const std::map<std::string, Preset>& presets() {
  static const std::map<std::string, Preset> table = {
      {"fig6",
       {ChannelKind::kAmplitudeDamping, 50, "1", "p1", kPi / 10,
        {kPi / 10, 2 * kPi / 3, 5 * kPi / 6}}},
      {"fig7",
       {ChannelKind::kDephasing, 100, "+", "plus", kPi / 5, {kPi / 5, kPi / 4, kPi / 2}}},
      {"fig8",
       {ChannelKind::kAmplitudeDamping, 50, "1", "p1", kPi / 8, {kPi / 8, 5 * kPi / 6, kPi}}},
  };
  return table;
}

class Builder {
 public:
  explicit Builder(const RawConfig& raw) : raw_(raw) {}

  const Entry* find(const std::string& key) const {
    const auto it = raw_.find(key);
    return it == raw_.end() ? nullptr : &it->second;
  }

  [[noreturn]] void fail(const Entry* e, std::string_view field, const std::string& msg) const {
    const std::string origin = e ? e->origin : std::string("config");
    throw ConfigError(origin + ": " + std::string(field) + ": " + msg);
  }

  double angle(const std::string& key, std::string_view field) const {
    const Entry* e = find(key);
    double value = 0.0;
    try {
      value = parse_angle(e->value);
    } catch (const std::invalid_argument& ex) {
      fail(e, field, ex.what());
    }
    check_angle(e, field, value);
    return value;
  }

  std::vector<double> angles(const std::string& key, std::string_view field) const {
    const Entry* e = find(key);
    std::vector<double> values;
    try {
      values = parse_angle_list(e->value);
    } catch (const std::invalid_argument& ex) {
      fail(e, field, ex.what());
    }
    for (double v : values) check_angle(e, field, v);
    return values;
  }

  double probability(const std::string& key, std::string_view field) const {
    const Entry* e = find(key);
    if (!e) return 0.0;
    const auto v = to_number(e->value);
    if (!v || *v < 0.0 || *v > 1.0) fail(e, field, "expected a probability in [0, 1]");
    return *v;
  }

 private:
  void check_angle(const Entry* e, std::string_view field, double v) const {
    if (!(v >= 0.0 && v < 2 * kPi)) fail(e, field, "angles must lie in [0, 2pi)");
  }

  const RawConfig& raw_;
};

ChannelKind channel_from(std::string_view s, bool& ok) {
  ok = true;
  if (s == "amplitude-damping") return ChannelKind::kAmplitudeDamping;
  if (s == "dephasing") return ChannelKind::kDephasing;
  if (s == "pauli") return ChannelKind::kPauli;
  if (s == "custom-file") return ChannelKind::kCustomFile;
  ok = false;
  return ChannelKind::kAmplitudeDamping;
}

Mode mode_from(std::string_view s, bool& ok) {
  ok = true;
  if (s == "markovian") return Mode::kMarkovian;
  if (s == "non-markovian") return Mode::kNonMarkovian;
  if (s == "sequential") return Mode::kSequential;
  ok = false;
  return Mode::kMarkovian;
}

}  // namespace

std::string_view to_string(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::kAmplitudeDamping: return "amplitude-damping";
    case ChannelKind::kDephasing: return "dephasing";
    case ChannelKind::kPauli: return "pauli";
    case ChannelKind::kCustomFile: return "custom-file";
  }
  return "";
}

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::kMarkovian: return "markovian";
    case Mode::kNonMarkovian: return "non-markovian";
    case Mode::kSequential: return "sequential";
  }
  return "";
}

double parse_angle(std::string_view text) {
  const std::string_view s = trim(text);
  const std::string bad = "bad angle '" + std::string(s) + "'";
  const auto pi = s.find("pi");
  if (pi == std::string_view::npos) {
    const auto v = to_number(s);
    if (!v) throw std::invalid_argument(bad);
    return *v;
  }
  std::string_view coef = trim(s.substr(0, pi));
  if (!coef.empty() && coef.back() == '*') coef = trim(coef.substr(0, coef.size() - 1));
  double factor = 1.0;
  if (!coef.empty()) {
    const auto c = to_number(coef);
    if (!c) throw std::invalid_argument(bad);
    factor = *c;
  }
  const std::string_view rest = trim(s.substr(pi + 2));
  double den = 1.0;
  if (!rest.empty()) {
    if (rest.front() != '/') throw std::invalid_argument(bad);
    const auto d = to_number(rest.substr(1));
    if (!d || *d == 0.0) throw std::invalid_argument(bad);
    den = *d;
  }
  return factor * kPi / den;
}

std::vector<double> parse_angle_list(std::string_view text) {
  std::vector<double> out;
  for (const auto item : split(text, ',')) {
    if (item.empty()) throw std::invalid_argument("empty entry in angle list");
    out.push_back(parse_angle(item));
  }
  return out;
}

InitialState parse_matrix(std::string_view text) {
  std::string_view s = trim(text);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') {
    throw std::invalid_argument("matrix must be written as [a b; c d]");
  }
  s = s.substr(1, s.size() - 2);
  InitialState st;
  const auto rows = split(s, ';');
  st.dim = static_cast<int>(rows.size());
  for (const auto row : rows) {
    std::istringstream in{std::string(row)};
    int count = 0;
    for (std::string tok; in >> tok; ++count) {
      const auto [re, im] = parse_complex(tok);
      st.re_im.push_back(re);
      st.re_im.push_back(im);
    }
    if (count != st.dim) throw std::invalid_argument("matrix must be square");
  }
  return st;
}

RawConfig parse_config_text(std::string_view text, const std::string& source) {
  RawConfig raw;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string line;
  for (int line_no = 1; std::getline(in, line); ++line_no) {
    const std::string where = source + ":" + std::to_string(line_no);
    const auto hash = line.find('#');
    std::string_view body = trim(std::string_view(line).substr(0, hash));
    if (body.empty() || body.front() == ';') continue;
    if (body.front() == '[') {
      if (body.back() != ']') throw ConfigError(where + ": unterminated section header");
      section = std::string(trim(body.substr(1, body.size() - 2)));
      if (!kKeys.contains(section)) {
        throw ConfigError(where + ": unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(where + ": expected 'key = value'");
    }
    if (section.empty()) throw ConfigError(where + ": key outside a section");
    const std::string key(trim(body.substr(0, eq)));
    const std::string value(trim(body.substr(eq + 1)));
    if (!kKeys.at(section).contains(key)) {
      throw ConfigError(where + ": unknown key '" + key + "' in [" + section + "]");
    }
    if (value.empty()) throw ConfigError(where + ": " + key + ": empty value");
    const std::string full = section + "." + key;
    if (raw.contains(full)) throw ConfigError(where + ": duplicate key '" + key + "'");
    raw[full] = {value, where};
  }
  return raw;
}

RawConfig read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

ExperimentConfig build_config(const RawConfig& raw) {
  const Builder b(raw);
  ExperimentConfig cfg;
  bool ok = true;

  if (const Entry* e = b.find("experiment.preset")) {
    const auto it = presets().find(e->value);
    if (it == presets().end()) b.fail(e, "preset", "unknown preset '" + e->value + "'");
    for (const char* fixed : {"channel", "mode", "theta", "thetas", "k", "px", "py", "pz",
                              "channel_file"}) {
      if (const Entry* f = b.find(std::string("experiment.") + fixed)) {
        b.fail(f, fixed, "fixed by preset " + e->value);
      }
    }
    const Preset& p = it->second;
    cfg.preset = e->value;
    cfg.channel = p.channel;
    cfg.steps = p.steps;
    cfg.initial.named = p.initial;
    cfg.observables = {p.observable};
    RunSpec markov{Mode::kMarkovian, p.theta, {}, 1, "markovian"};
    RunSpec memory{Mode::kNonMarkovian, std::nullopt, p.thetas,
                   static_cast<int>(p.thetas.size()), "non-markovian"};
    cfg.runs = {markov, memory};
  } else {
    const Entry* ch = b.find("experiment.channel");
    if (!ch) b.fail(nullptr, "channel", "required");
    cfg.channel = channel_from(ch->value, ok);
    if (!ok) {
      b.fail(ch, "channel",
             "expected amplitude-damping, dephasing, pauli or custom-file, got '" +
                 ch->value + "'");
    }
    const Entry* md = b.find("experiment.mode");
    if (!md) b.fail(nullptr, "mode", "required");
    RunSpec run;
    run.mode = mode_from(md->value, ok);
    run.name = std::string(to_string(run.mode));
    if (!ok) {
      b.fail(md, "mode",
             "expected markovian, non-markovian or sequential, got '" + md->value + "'");
    }
    const bool damping = cfg.channel == ChannelKind::kAmplitudeDamping ||
                         cfg.channel == ChannelKind::kDephasing;
    if (run.mode == Mode::kSequential && damping) {
      b.fail(ch, "channel", "sequential mode requires channel = pauli or custom-file");
    }
    if (run.mode != Mode::kSequential && !damping) {
      b.fail(ch, "channel",
             std::string(to_string(run.mode)) +
                 " mode requires channel = amplitude-damping or dephasing");
    }

    const Entry* theta = b.find("experiment.theta");
    const Entry* thetas = b.find("experiment.thetas");
    const Entry* k = b.find("experiment.k");
    if (run.mode == Mode::kMarkovian) {
      if (!theta) b.fail(nullptr, "theta", "required for markovian mode");
      if (thetas) b.fail(thetas, "thetas", "only used by non-markovian and sequential modes");
      if (k) b.fail(k, "k", "only used by non-markovian and sequential modes");
      run.theta = b.angle("experiment.theta", "theta");
    } else {
      if (theta) b.fail(theta, "theta", "use thetas for " + std::string(to_string(run.mode)) +
                                            " mode");
      if (!thetas && run.mode == Mode::kNonMarkovian) {
        b.fail(nullptr, "thetas", "required for non-markovian mode");
      }
      if (!thetas && k) b.fail(k, "k", "needs thetas");
      if (thetas) {
        run.thetas = b.angles("experiment.thetas", "thetas");
        run.k = static_cast<int>(run.thetas.size());
        if (k) {
          const auto kv = to_int(k->value);
          if (!kv) b.fail(k, "k", "expected an integer");
          if (*kv < 2) b.fail(k, "k", "memory order must be >= 2");
          if (*kv != run.k) {
            b.fail(thetas, "thetas",
                   "expected k = " + std::to_string(*kv) + " angles, got " +
                       std::to_string(run.k));
          }
        }
        if (run.k < 2) b.fail(thetas, "thetas", "memory needs at least 2 angles (k >= 2)");
        if (run.mode == Mode::kSequential && run.thetas[0] != 0.0) {
          b.fail(thetas, "thetas",
                 "first angle must be 0 in sequential mode; the current step comes "
                 "from the channel");
        }
      }
    }
    cfg.runs = {run};

    for (const char* p : {"px", "py", "pz"}) {
      const Entry* e = b.find(std::string("experiment.") + p);
      if (e && cfg.channel != ChannelKind::kPauli) b.fail(e, p, "only used by channel = pauli");
    }
    cfg.px = b.probability("experiment.px", "px");
    cfg.py = b.probability("experiment.py", "py");
    cfg.pz = b.probability("experiment.pz", "pz");
    if (cfg.px + cfg.py + cfg.pz > 1.0 + 1e-12) {
      b.fail(b.find("experiment.pz") ? b.find("experiment.pz") : b.find("experiment.px"),
             "pz", "px + py + pz must not exceed 1");
    }
    const Entry* file = b.find("experiment.channel_file");
    if (cfg.channel == ChannelKind::kCustomFile) {
      if (!file) b.fail(nullptr, "channel_file", "required for channel = custom-file");
      cfg.channel_file = file->value;
    } else if (file) {
      b.fail(file, "channel_file", "only used by channel = custom-file");
    }
  }

  if (const Entry* e = b.find("experiment.steps")) {
    const auto v = to_int(e->value);
    if (!v || *v < 1) b.fail(e, "steps", "expected an integer >= 1");
    cfg.steps = *v;
  } else if (cfg.steps == 0) {
    cfg.steps = cfg.channel == ChannelKind::kDephasing ? 100 : 50;
  }

  if (const Entry* e = b.find("experiment.initial")) {
    if (e->value == "0" || e->value == "1" || e->value == "+" || e->value == "-") {
      cfg.initial = {e->value, 0, {}};
    } else {
      try {
        cfg.initial = parse_matrix(e->value);
      } catch (const std::invalid_argument& ex) {
        b.fail(e, "initial", std::string(ex.what()) + " (or one of 0, 1, +, -)");
      }
    }
  } else if (cfg.initial.named.empty()) {
    cfg.initial.named = cfg.channel == ChannelKind::kAmplitudeDamping ? "1" : "+";
  }

  if (const Entry* e = b.find("experiment.observables")) {
    cfg.observables.clear();
    std::set<std::string> seen;
    for (const auto item : split(e->value, ',')) {
      const std::string name(item);
      if (name != "p0" && name != "p1" && name != "plus" && name != "minus") {
        b.fail(e, "observables", "unknown observable '" + name + "' (p0, p1, plus, minus)");
      }
      if (!seen.insert(name).second) b.fail(e, "observables", "duplicate '" + name + "'");
      cfg.observables.push_back(name);
    }
  } else if (cfg.observables.empty()) {
    switch (cfg.channel) {
      case ChannelKind::kAmplitudeDamping: cfg.observables = {"p1"}; break;
      case ChannelKind::kDephasing: cfg.observables = {"plus"}; break;
      default: cfg.observables = {"p0", "plus"};
    }
  }

  const Entry* csv = b.find("output.csv");
  cfg.csv = csv ? csv->value : (cfg.preset.empty() ? "trajectory" : cfg.preset) + ".csv";
  if (const Entry* e = b.find("output.svg")) cfg.svg = e->value;
  if (const Entry* e = b.find("output.circuit")) cfg.circuit = e->value;
  return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
  return build_config(read_config_file(path));
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, _] : presets()) names.push_back(name);
  return names;
}

}  // namespace simulate
