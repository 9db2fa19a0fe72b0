#pragma once
// Run configuration: a flat key = value document with two per-component
// initial-data sections, strict validation (unknown keys are errors), a
// canonical emitter that round-trips exactly, and trigonometric initial-data
// synthesis.

#include <string>
#include <vector>

#include "kinalign/types.hpp"

namespace kinalign {

// Configuration problem (syntax or validation). The CLI maps this to a
// different exit code than PreconditionError.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ModeSpec {
  int wavenumber = 1;   // positive integer
  double amplitude = 0.0;
  double phase = 0.0;
  bool operator==(const ModeSpec&) const = default;
};

// One component of the datum: mean + sum of amplitude*cos(2*pi*m*x + phase).
// Nonnegativity is guaranteed by requiring mean >= sum |amplitude|.
struct ComponentSpec {
  double mean = 0.0;
  std::vector<ModeSpec> modes;
  bool operator==(const ComponentSpec&) const = default;

  double amplitude_budget() const;
};

struct InitialDataSpec {
  ComponentSpec plus;
  ComponentSpec minus;
  bool operator==(const InitialDataSpec&) const = default;
};

enum class ExperimentName {
  simulate,             // one kinetic run, trajectory output
  homogeneous,          // space-free dynamics (constant data)
  layer,                // initial-layer profile plus decay certificate
  micro,                // microscopic update rule refinement study
  aligned_hyperbolic,   // epsilon ladder vs the wave-plus-layer approximant
  diffusive_parabolic,  // epsilon ladder vs the heat flow
};

const char* experiment_name(ExperimentName e);

struct RunConfig {
  ExperimentName experiment = ExperimentName::simulate;
  double gamma = 2.0;
  std::vector<double> epsilons = {1.0};  // one entry = plain epsilon
  Scaling scaling = Scaling::hyperbolic;
  Orientation k = Orientation::plus;
  int n_cells = 64;
  double t_end = 1.0;
  int sample_every = 0;  // 0 = choose a stride giving at least 50 samples
  double chi_floor = 1e-14;
  std::string out_dir = ".";
  InitialDataSpec initial;
  bool deterministic = true;  // the only supported mode; kept for audit trails

  bool operator==(const RunConfig&) const = default;
};

// Parses and fully validates. Errors carry the line number (syntax) or the
// key name and violated rule (validation). `overrides` entries look like
// "gamma=0.5" or "initial.minus.mean=0.2" and are applied before validation.
RunConfig parse_config(const std::string& text);
RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides);

// Canonical form: fixed key order, 17-significant-digit floats.
// parse_config(emit_config(c)) == c.
std::string emit_config(const RunConfig& config);

// Samples both components at cell centers. Output is nonnegative in every
// cell (the amplitude budget rule makes the true value nonnegative; rounding
// at the boundary is clamped).
KineticState synthesize_initial(const InitialDataSpec& spec, const Grid& grid);

}  // namespace kinalign
