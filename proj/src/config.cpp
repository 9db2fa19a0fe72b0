#include "kinalign/config.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace kinalign {

double ComponentSpec::amplitude_budget() const {
  double total = 0.0;
  for (const ModeSpec& m : modes) total += std::abs(m.amplitude);
  return total;
}

const char* experiment_name(ExperimentName e) {
  switch (e) {
    case ExperimentName::simulate: return "simulate";
    case ExperimentName::homogeneous: return "homogeneous";
    case ExperimentName::layer: return "layer";
    case ExperimentName::micro: return "micro";
    case ExperimentName::aligned_hyperbolic: return "aligned_hyperbolic";
    case ExperimentName::diffusive_parabolic: return "diffusive_parabolic";
  }
  return "?";
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail_line(int line, const std::string& what) {
  throw ConfigError("line " + std::to_string(line) + ": " + what);
}

double parse_real(const std::string& value, int line, const std::string& key) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    fail_line(line, "key '" + key + "': cannot parse '" + value + "' as a number");
  }
  if (used != value.size()) {
    fail_line(line, "key '" + key + "': trailing junk in '" + value + "'");
  }
  return v;
}

long long parse_int(const std::string& value, int line, const std::string& key) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(value, &used);
  } catch (const std::exception&) {
    fail_line(line, "key '" + key + "': cannot parse '" + value + "' as an integer");
  }
  if (used != value.size()) {
    fail_line(line, "key '" + key + "': trailing junk in '" + value + "'");
  }
  return v;
}

std::vector<std::string> split_commas(const std::string& value) {
  std::vector<std::string> parts;
  std::string cur;
  std::stringstream ss(value);
  while (std::getline(ss, cur, ',')) parts.push_back(trim(cur));
  return parts;
}

struct ParseState {
  RunConfig config;
  bool has_experiment = false;
  bool has_epsilon = false;
  bool has_epsilons = false;
  bool has_scaling = false;
};

// section: 0 global, 1 [initial.plus], 2 [initial.minus]
void apply_key(ParseState& st, int section, const std::string& key, const std::string& value,
               int line) {
  RunConfig& c = st.config;
  if (section != 0) {
    ComponentSpec& comp = section == 1 ? c.initial.plus : c.initial.minus;
    if (key == "mean") {
      comp.mean = parse_real(value, line, key);
      return;
    }
    if (key == "mode") {
      std::vector<std::string> parts = split_commas(value);
      if (parts.size() != 3) {
        fail_line(line, "key 'mode' takes wavenumber, amplitude, phase");
      }
      ModeSpec mode;
      long long m = parse_int(parts[0], line, "mode");
      if (m < 1 || m > 1000000) fail_line(line, "mode wavenumber must be a positive integer");
      mode.wavenumber = static_cast<int>(m);
      mode.amplitude = parse_real(parts[1], line, "mode");
      mode.phase = parse_real(parts[2], line, "mode");
      comp.modes.push_back(mode);
      return;
    }
    fail_line(line, "unknown key '" + key + "' in an initial-data section");
  }

  if (key == "experiment") {
    bool found = false;
    for (ExperimentName e :
         {ExperimentName::simulate, ExperimentName::homogeneous, ExperimentName::layer,
          ExperimentName::micro, ExperimentName::aligned_hyperbolic,
          ExperimentName::diffusive_parabolic}) {
      if (value == experiment_name(e)) {
        c.experiment = e;
        found = true;
      }
    }
    if (!found) fail_line(line, "unknown experiment '" + value + "'");
    st.has_experiment = true;
  } else if (key == "gamma") {
    c.gamma = parse_real(value, line, key);
  } else if (key == "epsilon") {
    if (st.has_epsilons) fail_line(line, "'epsilon' conflicts with an earlier 'epsilons'");
    c.epsilons = {parse_real(value, line, key)};
    st.has_epsilon = true;
  } else if (key == "epsilons") {
    if (st.has_epsilon) fail_line(line, "'epsilons' conflicts with an earlier 'epsilon'");
    std::vector<std::string> parts = split_commas(value);
    if (parts.empty()) fail_line(line, "'epsilons' needs at least one value");
    c.epsilons.clear();
    for (const std::string& p : parts) c.epsilons.push_back(parse_real(p, line, key));
    st.has_epsilons = true;
  } else if (key == "scaling") {
    if (value == "hyperbolic") {
      c.scaling = Scaling::hyperbolic;
    } else if (value == "parabolic") {
      c.scaling = Scaling::parabolic;
    } else {
      fail_line(line, "scaling must be 'hyperbolic' or 'parabolic'");
    }
    st.has_scaling = true;
  } else if (key == "k") {
    long long k = parse_int(value, line, key);
    if (k != 1 && k != -1) fail_line(line, "k must be 1 or -1");
    c.k = k == 1 ? Orientation::plus : Orientation::minus;
  } else if (key == "n_cells") {
    long long n = parse_int(value, line, key);
    if (n < 2 || n > 100000000) fail_line(line, "n_cells must be an integer >= 2");
    c.n_cells = static_cast<int>(n);
  } else if (key == "t_end") {
    c.t_end = parse_real(value, line, key);
  } else if (key == "sample_every") {
    long long s = parse_int(value, line, key);
    if (s < 0) fail_line(line, "sample_every must be >= 0 (0 = automatic)");
    c.sample_every = static_cast<int>(s);
  } else if (key == "chi_floor") {
    c.chi_floor = parse_real(value, line, key);
  } else if (key == "out") {
    c.out_dir = value;
  } else if (key == "deterministic") {
    if (value == "true") {
      c.deterministic = true;
    } else if (value == "false") {
      fail_line(line, "deterministic runs are the only supported mode");
    } else {
      fail_line(line, "deterministic must be 'true'");
    }
  } else {
    fail_line(line, "unknown key '" + key + "'");
  }
}

void validate(const RunConfig& c) {
  if (!(c.gamma > 0.0)) {
    throw ConfigError("gamma must be positive (got " + std::to_string(c.gamma) + ")");
  }
  if (c.gamma == 1.0) {
    throw ConfigError("gamma = 1 is excluded: the alignment rule degenerates there");
  }
  if (c.epsilons.empty()) throw ConfigError("epsilon(s): need at least one value");
  for (std::size_t i = 0; i < c.epsilons.size(); ++i) {
    if (!(c.epsilons[i] > 0.0)) throw ConfigError("epsilon values must be positive");
    if (i > 0 && !(c.epsilons[i] < c.epsilons[i - 1])) {
      throw ConfigError("epsilons must be strictly decreasing");
    }
  }
  if (c.n_cells < 2) throw ConfigError("n_cells must be >= 2");
  if (!(c.t_end > 0.0)) throw ConfigError("t_end must be positive");
  if (c.sample_every < 0) throw ConfigError("sample_every must be >= 0");
  if (!(c.chi_floor >= 0.0) || c.chi_floor > 1e-3) {
    throw ConfigError("chi_floor must lie in [0, 1e-3]");
  }
  if (c.experiment == ExperimentName::aligned_hyperbolic && c.scaling != Scaling::hyperbolic) {
    throw ConfigError("experiment aligned_hyperbolic requires scaling = hyperbolic");
  }
  if (c.experiment == ExperimentName::diffusive_parabolic && c.scaling != Scaling::parabolic) {
    throw ConfigError("experiment diffusive_parabolic requires scaling = parabolic");
  }
  if (c.experiment == ExperimentName::homogeneous &&
      (!c.initial.plus.modes.empty() || !c.initial.minus.modes.empty())) {
    throw ConfigError("experiment homogeneous uses constant data: no modes allowed");
  }
  for (const auto* comp : {&c.initial.plus, &c.initial.minus}) {
    if (!(comp->mean >= 0.0)) throw ConfigError("initial mean must be >= 0");
    if (comp->mean - comp->amplitude_budget() < 0.0) {
      throw ConfigError(
          "initial data risks negativity: mean must be at least the sum of |amplitude|");
    }
    for (const ModeSpec& m : comp->modes) {
      if (m.wavenumber < 1) throw ConfigError("mode wavenumbers must be positive");
      if (!std::isfinite(m.amplitude) || !std::isfinite(m.phase)) {
        throw ConfigError("mode amplitude and phase must be finite");
      }
    }
  }
}

ParseState parse_raw(const std::string& text) {
  ParseState st;
  std::stringstream ss(text);
  std::string raw;
  int line = 0;
  int section = 0;
  while (std::getline(ss, raw)) {
    ++line;
    std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    std::string s = trim(raw);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail_line(line, "unterminated section header");
      std::string name = trim(s.substr(1, s.size() - 2));
      if (name == "initial.plus") {
        section = 1;
      } else if (name == "initial.minus") {
        section = 2;
      } else {
        fail_line(line, "unknown section '" + name + "'");
      }
      continue;
    }
    std::size_t eq = s.find('=');
    if (eq == std::string::npos) fail_line(line, "expected 'key = value'");
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (key.empty()) fail_line(line, "empty key");
    apply_key(st, section, key, value, line);
  }
  if (!st.has_experiment) throw ConfigError("missing required key 'experiment'");
  return st;
}

void apply_override(ParseState& st, const std::string& entry) {
  std::size_t eq = entry.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("override '" + entry + "' is not of the form key=value");
  }
  std::string key = trim(entry.substr(0, eq));
  std::string value = trim(entry.substr(eq + 1));
  // overrides reach scalar keys plus the per-component means
  if (key == "initial.plus.mean") {
    st.config.initial.plus.mean = parse_real(value, 0, key);
  } else if (key == "initial.minus.mean") {
    st.config.initial.minus.mean = parse_real(value, 0, key);
  } else if (key.rfind("initial.", 0) == 0) {
    throw ConfigError("override '" + key + "': only initial.*.mean can be overridden");
  } else {
    apply_key(st, 0, key, value, 0);
  }
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void emit_component(std::ostringstream& out, const char* name, const ComponentSpec& comp) {
  out << "\n[initial." << name << "]\n";
  out << "mean = " << format_real(comp.mean) << "\n";
  for (const ModeSpec& m : comp.modes) {
    out << "mode = " << m.wavenumber << ", " << format_real(m.amplitude) << ", "
        << format_real(m.phase) << "\n";
  }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  return parse_config(text, {});
}

RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides) {
  ParseState st = parse_raw(text);
  for (const std::string& entry : overrides) apply_override(st, entry);
  validate(st.config);
  return st.config;
}

std::string emit_config(const RunConfig& config) {
  std::ostringstream out;
  out << "experiment = " << experiment_name(config.experiment) << "\n";
  out << "gamma = " << format_real(config.gamma) << "\n";
  out << "epsilons = ";
  for (std::size_t i = 0; i < config.epsilons.size(); ++i) {
    if (i) out << ", ";
    out << format_real(config.epsilons[i]);
  }
  out << "\n";
  out << "scaling = " << (config.scaling == Scaling::hyperbolic ? "hyperbolic" : "parabolic")
      << "\n";
  out << "k = " << sign(config.k) << "\n";
  out << "n_cells = " << config.n_cells << "\n";
  out << "t_end = " << format_real(config.t_end) << "\n";
  out << "sample_every = " << config.sample_every << "\n";
  out << "chi_floor = " << format_real(config.chi_floor) << "\n";
  out << "out = " << config.out_dir << "\n";
  out << "deterministic = true\n";
  emit_component(out, "plus", config.initial.plus);
  emit_component(out, "minus", config.initial.minus);
  return out.str();
}

KineticState synthesize_initial(const InitialDataSpec& spec, const Grid& grid) {
  for (const auto* comp : {&spec.plus, &spec.minus}) {
    if (!(comp->mean >= 0.0) || comp->mean - comp->amplitude_budget() < 0.0) {
      throw ConfigError("synthesize_initial: mean must cover the sum of |amplitude|");
    }
  }
  KineticState f(grid.n_cells);
  for (int i = 0; i < grid.n_cells; ++i) {
    double x = grid.center(i);
    for (Orientation j : {Orientation::plus, Orientation::minus}) {
      const ComponentSpec& comp = j == Orientation::plus ? spec.plus : spec.minus;
      double v = comp.mean;
      for (const ModeSpec& m : comp.modes) {
        v += m.amplitude * std::cos(2.0 * std::numbers::pi * m.wavenumber * x + m.phase);
      }
      // the budget rule makes the true value >= 0; rounding can graze below
      f.component(j)[i] = std::max(v, 0.0);
    }
  }
  return f;
}

}  // namespace kinalign
