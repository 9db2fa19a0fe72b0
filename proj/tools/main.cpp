// Command-line driver: one subcommand per experiment, plus a fast selftest.
// Exit codes: 0 pass, 1 usage or configuration error, 2 numerical
// precondition failure, 3 acceptance-check failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kinalign/collision.hpp"
#include "kinalign/config.hpp"
#include "kinalign/harness.hpp"
#include "kinalign/report.hpp"
#include "kinalign/solver.hpp"
#include "kinalign/spectral.hpp"

namespace {

using namespace kinalign;

constexpr int kExitPass = 0;
constexpr int kExitConfig = 1;
constexpr int kExitPrecondition = 2;
constexpr int kExitCheckFailed = 3;

struct CommonArgs {
  std::string config_path;
  std::string out_dir;  // overrides the config's `out` when nonempty
  std::vector<std::string> overrides;
  int jobs = 1;
  bool unstable_demo = false;
};

RunConfig load_config(const CommonArgs& args) {
  std::ifstream in(args.config_path);
  if (!in) throw ConfigError("cannot read config file '" + args.config_path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  RunConfig config = parse_config(buf.str(), args.overrides);
  if (!args.out_dir.empty()) config.out_dir = args.out_dir;
  return config;
}

void write_file(const std::string& dir, const std::string& name, const std::string& content) {
  std::filesystem::create_directories(dir);
  std::string path = dir + "/" + name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << content;
}

void require_experiment(const RunConfig& config, std::initializer_list<ExperimentName> allowed,
                        const char* subcommand) {
  for (ExperimentName e : allowed) {
    if (config.experiment == e) return;
  }
  throw ConfigError(std::string("subcommand '") + subcommand + "' cannot run experiment '" +
                    experiment_name(config.experiment) + "'");
}

const char* flag_word(bool v) { return v ? "true" : "false"; }

std::string conditions_line(const ConditionReport& r) {
  std::ostringstream s;
  s << "mu=" << format_real17(r.mu) << " minority_positive=" << flag_word(r.minority_positive)
    << " pointwise_domination=" << flag_word(r.pointwise_domination)
    << " uniform_domination=" << flag_word(r.uniform_domination)
    << " c_gamma=" << format_real17(r.c_gamma_used);
  return s.str();
}

ModelParams params_from(const RunConfig& config, double epsilon) {
  ModelParams params;
  params.gamma = config.gamma;
  params.epsilon = epsilon;
  params.scaling = config.scaling;
  params.chi_floor = config.chi_floor;
  return params;
}

int run_simulate(const CommonArgs& args) {
  RunConfig config = load_config(args);
  require_experiment(config, {ExperimentName::simulate}, "simulate");
  if (config.epsilons.size() != 1) {
    throw ConfigError("simulate takes a single epsilon, not a ladder");
  }
  Grid grid = Grid::uniform(config.n_cells);
  KineticState F = synthesize_initial(config.initial, grid);
  SolveOptions opts;
  opts.sample_every = config.sample_every;
  Trajectory traj = solve_kinetic(F, params_from(config, config.epsilons[0]), grid,
                                  config.t_end, opts);
  write_file(config.out_dir, "trajectory.csv", trajectory_csv(traj));
  std::cout << "simulate: " << traj.times.size() << " samples on " << grid.n_cells
            << " cells, t_end " << format_real17(config.t_end) << "\n"
            << "mass drift " << format_real17(traj.mass_drift) << ", min value "
            << format_real17(traj.min_seen) << "\n"
            << "wrote " << config.out_dir << "/trajectory.csv\n";
  return kExitPass;
}

int run_homogeneous(const CommonArgs& args) {
  RunConfig config = load_config(args);
  require_experiment(config, {ExperimentName::homogeneous}, "homogeneous");
  HomogeneousState h0{config.initial.plus.mean, config.initial.minus.mean};
  auto samples = solve_homogeneous(h0, config.gamma, config.t_end);
  write_file(config.out_dir, "homogeneous.csv", homogeneous_csv(samples));
  const HomogeneousState& last = samples.back().second;
  std::cout << "homogeneous: gamma " << format_real17(config.gamma) << ", (f1, f-1) ("
            << format_real17(h0.f1) << ", " << format_real17(h0.f_minus1) << ") -> ("
            << format_real17(last.f1) << ", " << format_real17(last.f_minus1) << ") at t "
            << format_real17(config.t_end) << "\n"
            << "wrote " << config.out_dir << "/homogeneous.csv\n";
  return kExitPass;
}

int run_layer(const CommonArgs& args) {
  RunConfig config = load_config(args);
  require_experiment(config, {ExperimentName::layer}, "layer");
  Grid grid = Grid::uniform(config.n_cells);
  KineticState F = synthesize_initial(config.initial, grid);
  MacroField rho0(grid.n_cells), h0(grid.n_cells);
  double max_h0 = 0.0, sup_h0 = 0.0;
  for (int i = 0; i < grid.n_cells; ++i) {
    rho0.rho[i] = F.f_plus[i] + F.f_minus[i];
    h0.rho[i] = F.component(flip(config.k))[i];
    max_h0 = std::max(max_h0, h0.rho[i]);
    sup_h0 = std::max(sup_h0, h0.rho[i]);
  }
  if (max_h0 == 0.0) {
    std::cout << "layer: minority component is identically zero; the aligned wave is exact "
                 "and the layer vanishes\n";
    LayerProfile trivial;
    trivial.taus = {0.0, config.t_end};
    trivial.values.assign(2, MacroField(grid.n_cells));
    trivial.rho0 = rho0;
    trivial.h0 = h0;
    write_file(config.out_dir, "layer.csv", layer_csv(trivial, grid));
    return kExitPass;
  }

  double c_gamma = default_c_gamma(config.gamma);
  LayerCertificate cert = layer_certificate(rho0, h0, config.gamma, c_gamma);
  std::cout << "layer certificate: theta_max " << format_real17(cert.theta_max) << ", delta "
            << format_real17(cert.delta) << ", c_gamma " << format_real17(cert.c_gamma) << "\n"
            << "conditions: minority_floor=" << flag_word(cert.floor_positive)
            << " pointwise=" << flag_word(cert.pointwise_dominated)
            << " uniform=" << flag_word(cert.uniform_dominated) << "\n";

  LayerProfile profile = initial_layer_solve(rho0, h0, config.gamma, config.t_end);
  write_file(config.out_dir, "layer.csv", layer_csv(profile, grid));
  std::cout << "wrote " << config.out_dir << "/layer.csv\n";

  double worst = 0.0;  // breach of h(tau,x) <= h0(x) exp(-delta tau)
  for (std::size_t s = 0; s < profile.taus.size(); ++s) {
    double decay = std::exp(-cert.delta * profile.taus[s]);
    for (int i = 0; i < grid.n_cells; ++i) {
      worst = std::max(worst, profile.values[s].rho[i] - h0.rho[i] * decay);
    }
  }
  bool decay_ok = worst <= 1e-12 * sup_h0;
  std::cout << "decay bound h <= h0 exp(-delta tau): " << (decay_ok ? "holds" : "VIOLATED")
            << " (worst breach " << format_real17(worst) << ")\n";

  try {
    DecayFit fit = layer_derivative_decay(profile, grid, std::max(1.0, sup_h0));
    if (fit.trivial) {
      std::cout << "derivative decay: profile is x-independent, nothing to fit\n";
    } else {
      std::cout << "derivative decay: fitted rate " << format_real17(fit.delta1)
                << ", log residual " << format_real17(fit.residual) << "\n";
    }
  } catch (const PreconditionError& e) {
    std::cout << "derivative decay: " << e.what() << "\n";
  }
  return decay_ok ? kExitPass : kExitCheckFailed;
}

SweepRequest sweep_request_from(const RunConfig& config, const CommonArgs& args) {
  SweepRequest req;
  req.kind = config.experiment == ExperimentName::aligned_hyperbolic
                 ? SweepKind::aligned_hyperbolic
                 : SweepKind::diffusive_parabolic;
  req.gamma = config.gamma;
  req.epsilons = config.epsilons;
  req.k = config.k;
  req.n_cells = config.n_cells;
  req.t_end = config.t_end;
  req.jobs = args.jobs;
  req.unstable_demo = args.unstable_demo;
  InitialDataSpec initial = config.initial;
  req.initial = [initial](const Grid& g) { return synthesize_initial(initial, g); };
  return req;
}

std::string sweep_conditions(const RunConfig& config, const ErrorSeries& series) {
  if (config.experiment == ExperimentName::aligned_hyperbolic) {
    Grid grid = Grid::uniform(series.n_cells_used);
    ConditionReport report =
        check_conditions(synthesize_initial(config.initial, grid), config.k, config.gamma);
    return conditions_line(report);
  }
  return "equal_components=true (enforced before the run)";
}

// Rate refitted over the rungs whose relaxation window (about 10*epsilon) fits
// in half the horizon. A coarser rung spends its whole run inside the layer,
// so it cannot show the limiting slope and would drag the fit down.
ErrorSeries settled_subladder(const ErrorSeries& series, double t_end) {
  ErrorSeries out;
  for (std::size_t i = 0; i < series.epsilons.size(); ++i) {
    if (20.0 * series.epsilons[i] <= t_end) {
      out.epsilons.push_back(series.epsilons[i]);
      out.errors.push_back(series.errors[i]);
    }
  }
  if (out.epsilons.size() >= 2) fit_order(out);
  return out;
}

int run_sweep(const CommonArgs& args) {
  RunConfig config = load_config(args);
  require_experiment(
      config, {ExperimentName::aligned_hyperbolic, ExperimentName::diffusive_parabolic}, "sweep");
  ErrorSeries series = epsilon_sweep(sweep_request_from(config, args));

  SweepReportData data;
  data.config = config;
  data.series = series;
  data.conditions = sweep_conditions(config, series);
  bool pass = true;
  if (series.epsilons.size() >= 2) {
    pass = series.monotone;
    if (config.experiment == ExperimentName::aligned_hyperbolic) {
      ErrorSeries settled = settled_subladder(series, config.t_end);
      if (settled.has_order) {
        data.has_settled_order = true;
        data.settled_order = settled.fitted_order;
        data.settled_rungs = static_cast<int>(settled.epsilons.size());
      }
      const ErrorSeries& basis = settled.has_order ? settled : series;
      pass = pass && basis.has_order && basis.fitted_order >= 0.9;
    }
  }
  data.pass = pass;
  std::string report = sweep_report(data);
  write_file(config.out_dir, "sweep_report.txt", report);
  std::cout << report << "wrote " << config.out_dir << "/sweep_report.txt\n";
  return pass ? kExitPass : kExitCheckFailed;
}

int run_limit_check(const CommonArgs& args) {
  RunConfig config = load_config(args);
  require_experiment(
      config, {ExperimentName::aligned_hyperbolic, ExperimentName::diffusive_parabolic},
      "limit-check");
  if (config.epsilons.size() != 1) {
    throw ConfigError("limit-check takes a single epsilon; use sweep for a ladder");
  }
  SweepRequest req = sweep_request_from(config, args);
  req.allow_refine = false;
  ErrorSeries series = epsilon_sweep(req);
  double eps = series.epsilons[0];
  double err = series.errors[0];
  std::cout << "limit-check: experiment " << experiment_name(config.experiment) << ", epsilon "
            << format_real17(eps) << "\n"
            << "sup-in-time error vs the limit object: " << format_real17(err) << "\n"
            << "error / epsilon: " << format_real17(err / eps) << "\n"
            << "conditions: " << sweep_conditions(config, series) << "\n";
  return kExitPass;
}

int run_micro(const CommonArgs& args) {
  RunConfig config = load_config(args);
  require_experiment(config, {ExperimentName::micro}, "micro");
  if (config.epsilons.size() != 1 || config.epsilons[0] != 1.0) {
    throw ConfigError("the micro experiment runs at epsilon = 1 (the unscaled system)");
  }

  ErrorSeries series;
  series.n_cells_used = config.n_cells;
  std::ostringstream table;
  table << "dx,sup_error_at_t_end\n";
  for (int level = 0; level < 3; ++level) {
    int n = config.n_cells << level;
    Grid grid = Grid::uniform(n);
    long long steps = std::llround(config.t_end * n);
    if (std::abs(config.t_end - static_cast<double>(steps) * grid.dx) >
        1e-9 * std::max(1.0, config.t_end)) {
      throw PreconditionError("micro: t_end must be an integer number of steps on every grid");
    }
    KineticState F = synthesize_initial(config.initial, grid);
    KineticState cur = F;
    for (long long s = 0; s < steps; ++s) cur = micro_step(cur, grid.dx, config.gamma, grid);
    Trajectory ref = solve_kinetic(F, params_from(config, 1.0), grid, config.t_end,
                                   static_cast<int>(steps));
    const KineticState& fin = ref.states.back();
    double dp = 0.0, dm = 0.0;
    for (int i = 0; i < n; ++i) {
      dp = std::max(dp, std::abs(cur.f_plus[i] - fin.f_plus[i]));
      dm = std::max(dm, std::abs(cur.f_minus[i] - fin.f_minus[i]));
    }
    series.epsilons.push_back(grid.dx);  // refinement parameter takes the epsilon slot
    series.errors.push_back(dp + dm);
    table << format_real17(grid.dx) << ',' << format_real17(dp + dm) << '\n';
  }
  fit_order(series);
  bool pass = series.has_order && series.fitted_order >= 0.8;
  std::ostringstream out;
  out << table.str() << "fitted_order = "
      << (series.has_order ? format_real17(series.fitted_order) : std::string("none")) << "\n"
      << "pass = " << flag_word(pass) << "\n";
  write_file(config.out_dir, "micro_report.txt", out.str());
  std::cout << "micro refinement study vs the splitting solver at matching grids\n"
            << out.str() << "wrote " << config.out_dir << "/micro_report.txt\n";
  return pass ? kExitPass : kExitCheckFailed;
}

int run_selftest() {
  int failures = 0;
  auto check = [&failures](bool ok, const std::string& name) {
    std::cout << (ok ? "ok:   " : "FAIL: ") << name << "\n";
    if (!ok) ++failures;
  };

  {
    ValuePair q = collision_q_cell(2.0, 1.0, 2.0, 1e-14);
    check(std::abs(q.plus - 0.4) < 1e-15 && q.plus + q.minus == 0.0,
          "collision rate on (2,1) at gamma 2");
    ValuePair r = collision_r_cell(2.0, 1.0, 2.0, 1e-14);
    check(std::abs(r.plus - 2.4) < 1e-12 && std::abs(r.minus - 0.6) < 1e-12,
          "gain term on (2,1) at gamma 2");
  }
  {
    Grid grid = Grid::uniform(8);
    MacroField rho(8, 3.0);
    bool ok = true;
    for (EquilibriumKind kind : {EquilibriumKind::diffusive(),
                                 EquilibriumKind::aligned(Orientation::plus),
                                 EquilibriumKind::aligned(Orientation::minus)}) {
      KineticState m = maxwellian(kind, rho, grid);
      ModelParams params;
      KineticState q = collision_q(m, params, grid);
      ok = ok && norm_sup(q) == 0.0;
    }
    check(ok, "equilibria sit in the collision kernel");
  }
  {
    ValuePair p{3.0, 1.0};
    ValuePair hy = project(EquilibriumKind::diffusive(), p, SubspaceSelector::hydrodynamic);
    ValuePair ki = project(EquilibriumKind::diffusive(), p, SubspaceSelector::kinetic);
    check(hy.plus == 2.0 && hy.minus == 2.0 && hy.plus + ki.plus == p.plus &&
              hy.minus + ki.minus == p.minus,
          "projections split the state");
  }
  {
    Grid grid = Grid::uniform(32);
    KineticState f0(32);
    for (int i = 0; i < 32; ++i) f0.f_plus[i] = 2.0 + std::cos(2.0 * 3.141592653589793 * grid.center(i));
    ModelParams params;
    Trajectory traj = solve_kinetic(f0, params, grid, 0.25, 1);
    KineticState expect = sharp_transform(f0, 0.25, grid, true);
    double err = 0.0;
    for (int i = 0; i < 32; ++i) {
      err = std::max(err, std::abs(traj.states.back().f_plus[i] - expect.f_plus[i]));
      err = std::max(err, std::abs(traj.states.back().f_minus[i]));
    }
    check(err <= 1e-10, "one-sided wave is exact");
  }
  {
    auto samples = solve_homogeneous({2.0, 1.0}, 2.0, 50.0, 11);
    const HomogeneousState& last = samples.back().second;
    check(std::abs(last.f1 - 3.0) < 1e-6 && std::abs(last.f_minus1) < 1e-6,
          "majority takes all for gamma > 1");
  }
  {
    Grid grid = Grid::uniform(64);
    MacroField rho0(64);
    for (int i = 0; i < 64; ++i) {
      rho0.rho[i] = 1.0 + std::cos(2.0 * 3.141592653589793 * grid.center(i));
    }
    HeatSolution heat = heat_solve_at(rho0, 0.5, {0.0, 0.1}, grid);
    double err = 0.0;
    double decay = std::exp(-4.0 * 3.141592653589793 * 3.141592653589793 * 0.5 * 0.1);
    for (int i = 0; i < 64; ++i) {
      double expect = 1.0 + decay * std::cos(2.0 * 3.141592653589793 * grid.center(i));
      err = std::max(err, std::abs(heat.fields[1].rho[i] - expect));
    }
    check(err <= 1e-12, "heat solver matches the single-mode solution");
  }
  {
    MacroField q = split_collision_term(MacroField(4, 3.0), MacroField(4, 1.0), 2.0);
    check(q.rho[0] == -0.4, "minority loss rate on (3,1) at gamma 2");
    // the layer solver itself insists on domination, so probe the slope there
    MacroField rho0(4, 5.0), h0(4, 0.5);
    LayerProfile p = initial_layer_solve_at(rho0, h0, 2.0, {0.0, 1e-6});
    double slope = (p.values[1].rho[0] - 0.5) / 1e-6;
    check(std::abs(slope + 9.0 / 20.5) < 1e-4, "layer initial slope on (5,1/2) at gamma 2");
    LayerCertificate cert = layer_certificate(MacroField(4, 4.0), MacroField(4, 1.0), 2.0, 4.0);
    check(std::abs(cert.delta - 0.6) < 1e-13, "certificate rate at theta 1/3");
  }
  {
    double c2 = default_c_gamma(2.0);
    double exact = 3.0 + std::sqrt(3.0);
    check(c2 >= exact - 1e-9 && c2 <= exact * 1.01 + 1e-9, "domination threshold for gamma 2");
  }
  {
    RunConfig config;
    config.experiment = ExperimentName::aligned_hyperbolic;
    config.epsilons = {0.1, 0.05};
    config.initial.plus = {5.0, {{1, 1.0, 0.0}}};
    config.initial.minus = {0.5, {{1, 0.2, 0.0}}};
    check(parse_config(emit_config(config)) == config, "config round-trips");
  }
  std::cout << (failures == 0 ? "selftest passed\n" : "selftest FAILED\n");
  return failures == 0 ? kExitPass : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-orientation kinetic alignment model: solver and limit checks"};
  app.require_subcommand(1);

  CommonArgs args;
  auto add_common = [&args](CLI::App* sub) {
    sub->add_option("--config", args.config_path, "configuration file")->required();
    sub->add_option("--out", args.out_dir, "output directory (overrides the config)");
    sub->add_option("--override", args.overrides,
                    "key=value applied on top of the config (repeatable)");
  };

  CLI::App* simulate = app.add_subcommand("simulate", "one kinetic run, trajectory output");
  add_common(simulate);
  CLI::App* homogeneous =
      app.add_subcommand("homogeneous", "space-free dynamics toward the aligned or equal state");
  add_common(homogeneous);
  CLI::App* layer =
      app.add_subcommand("layer", "initial-layer profile with its decay certificate");
  add_common(layer);
  CLI::App* limit_check =
      app.add_subcommand("limit-check", "single-epsilon comparison against the limit object");
  add_common(limit_check);
  limit_check->add_flag("--unstable-demo", args.unstable_demo,
                        "allow the backward heat comparison for gamma > 1");
  CLI::App* sweep = app.add_subcommand("sweep", "epsilon ladder with a convergence-order fit");
  add_common(sweep);
  sweep->add_option("--jobs", args.jobs, "parallel solves across the ladder")
      ->check(CLI::Range(1, 256));
  sweep->add_flag("--unstable-demo", args.unstable_demo,
                  "allow the backward heat comparison for gamma > 1");
  CLI::App* micro =
      app.add_subcommand("micro", "microscopic update rule refinement study");
  add_common(micro);
  CLI::App* selftest = app.add_subcommand("selftest", "fast invariant subset, no config needed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitPass : kExitConfig;
  }

  try {
    if (simulate->parsed()) return run_simulate(args);
    if (homogeneous->parsed()) return run_homogeneous(args);
    if (layer->parsed()) return run_layer(args);
    if (limit_check->parsed()) return run_limit_check(args);
    if (sweep->parsed()) return run_sweep(args);
    if (micro->parsed()) return run_micro(args);
    if (selftest->parsed()) return run_selftest();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition failed: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
