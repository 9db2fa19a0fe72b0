#include "kinalign/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "kinalign/spectral.hpp"

namespace kinalign {

ConditionReport check_conditions(const KineticState& F, Orientation k, double gamma) {
  if (F.size() == 0 || F.f_plus.size() != F.f_minus.size()) {
    throw std::invalid_argument("check_conditions: datum must be nonempty with equal components");
  }
  ConditionReport report;
  report.c_gamma_used = default_c_gamma(gamma);
  report.mu = min_value(F);

  const std::vector<double>& maj = F.component(k);
  const std::vector<double>& min_c = F.component(flip(k));
  double min_maj = *std::min_element(maj.begin(), maj.end());
  double min_min = *std::min_element(min_c.begin(), min_c.end());
  double max_min = *std::max_element(min_c.begin(), min_c.end());

  report.minority_positive = min_min > 0.0;
  report.uniform_domination = min_maj >= report.c_gamma_used * max_min;
  report.pointwise_domination = true;
  for (std::size_t i = 0; i < maj.size(); ++i) {
    if (!(maj[i] > report.c_gamma_used * min_c[i])) {
      report.pointwise_domination = false;
      break;
    }
  }
  return report;
}

double sup_error(const Trajectory& traj,
                 const std::function<KineticState(std::size_t)>& reference) {
  double worst = 0.0;
  for (std::size_t s = 0; s < traj.states.size(); ++s) {
    KineticState ref = reference(s);
    if (ref.size() != traj.states[s].size()) {
      throw std::invalid_argument("sup_error: reference size mismatch at sample " +
                                  std::to_string(s));
    }
    double dp = 0.0, dm = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
      dp = std::max(dp, std::abs(traj.states[s].f_plus[i] - ref.f_plus[i]));
      dm = std::max(dm, std::abs(traj.states[s].f_minus[i] - ref.f_minus[i]));
    }
    worst = std::max(worst, dp + dm);
  }
  return worst;
}

double sup_error(const Trajectory& traj, const std::vector<KineticState>& reference) {
  if (reference.size() != traj.states.size()) {
    throw std::invalid_argument("sup_error: sample count mismatch");
  }
  return sup_error(traj, [&reference](std::size_t s) { return reference[s]; });
}

void fit_order(ErrorSeries& series) {
  const std::vector<double>& eps = series.epsilons;
  const std::vector<double>& err = series.errors;
  if (eps.size() != err.size()) {
    throw std::invalid_argument("fit_order: epsilons and errors differ in length");
  }
  series.monotone = err.size() >= 2;
  for (std::size_t i = 0; i + 1 < err.size(); ++i) {
    if (!(err[i + 1] < err[i])) series.monotone = false;
  }
  series.has_order = eps.size() >= 2;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0) || !(err[i] > 0.0)) series.has_order = false;
  }
  if (!series.has_order) {
    series.fitted_order = 0.0;
    series.fit_residual = 0.0;
    return;
  }
  std::size_t n = eps.size();
  double mx = 0.0, my = 0.0;
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    lx[i] = std::log(eps[i]);
    ly[i] = std::log(err[i]);
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (lx[i] - mx) * (ly[i] - my);
    den += (lx[i] - mx) * (lx[i] - mx);
  }
  if (!(den > 0.0)) {
    series.has_order = false;
    return;
  }
  series.fitted_order = num / den;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = ly[i] - (my + series.fitted_order * (lx[i] - mx));
    rss += r * r;
  }
  series.fit_residual = std::sqrt(rss / n);
}

namespace {

template <class Fn>
void run_indexed(std::size_t count, int jobs, Fn&& fn) {
  int workers = std::max(1, std::min(jobs, static_cast<int>(count)));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::vector<double> run_ladder(const SweepRequest& req, int n_cells) {
  Grid grid = Grid::uniform(n_cells);
  KineticState F = req.initial(grid);
  check_matches_grid(F, grid, "epsilon_sweep");
  check_finite(F, "epsilon_sweep");
  check_nonnegative(F, "epsilon_sweep");

  if (req.kind == SweepKind::aligned_hyperbolic) {
    if (!(req.gamma > 1.0)) {
      throw PreconditionError("epsilon_sweep: the aligned regime requires gamma > 1");
    }
    ConditionReport report = check_conditions(F, req.k, req.gamma);
    if (!report.uniform_domination) {
      throw PreconditionError(
          "epsilon_sweep: aligned regime needs min F(k) >= c_gamma * max F(-k), c_gamma = " +
          std::to_string(report.c_gamma_used));
    }
  } else {
    double skew = 0.0;
    for (std::size_t i = 0; i < F.size(); ++i) {
      skew = std::max(skew, std::abs(F.f_plus[i] - F.f_minus[i]));
    }
    if (skew > 1e-12 * std::max(1.0, norm_sup(F))) {
      throw PreconditionError(
          "epsilon_sweep: diffusive regime needs equal components in the datum "
          "(local equilibrium), skew " +
          std::to_string(skew));
    }
    // validates the sign of the coefficient up front (backward flow is gated)
    DiffusionSpec::make(req.gamma, 1.0, DiffusionRegime::parabolic_zeroth, req.unstable_demo);
  }

  std::vector<double> errors(req.epsilons.size(), 0.0);
  run_indexed(req.epsilons.size(), req.jobs, [&](std::size_t idx) {
    double eps = req.epsilons[idx];
    ModelParams params;
    params.gamma = req.gamma;
    params.epsilon = eps;

    SolveOptions opts;
    opts.sample_every = 0;
    if (req.kind == SweepKind::aligned_hyperbolic) {
      params.scaling = Scaling::hyperbolic;
      opts.dense_until = 10.0 * eps;
      Trajectory traj = solve_kinetic(F, params, grid, req.t_end, opts);
      CompositeApproximant approx =
          build_aligned_approximant(F, req.k, req.gamma, eps, grid, traj.times);
      errors[idx] = sup_error(traj, [&approx](std::size_t s) { return approx.at(s); });
    } else {
      params.scaling = Scaling::parabolic;
      Trajectory traj = solve_kinetic(F, params, grid, req.t_end, opts);
      MacroField rho0(grid.n_cells);
      for (int i = 0; i < grid.n_cells; ++i) rho0.rho[i] = F.f_plus[i] + F.f_minus[i];
      DiffusionSpec spec = DiffusionSpec::make(req.gamma, eps, DiffusionRegime::parabolic_zeroth,
                                               req.unstable_demo);
      HeatSolution heat =
          heat_solve_at(rho0, spec.coefficient, traj.times, grid, req.unstable_demo);
      double worst = 0.0;
      for (std::size_t s = 0; s < traj.states.size(); ++s) {
        for (int i = 0; i < grid.n_cells; ++i) {
          double rho = traj.states[s].f_plus[i] + traj.states[s].f_minus[i];
          worst = std::max(worst, std::abs(rho - heat.fields[s].rho[i]));
        }
      }
      errors[idx] = worst;
    }
  });
  return errors;
}

}  // namespace

ErrorSeries epsilon_sweep(const SweepRequest& request) {
  if (request.epsilons.empty()) {
    throw std::invalid_argument("epsilon_sweep: need at least one epsilon");
  }
  for (std::size_t i = 0; i < request.epsilons.size(); ++i) {
    if (!(request.epsilons[i] > 0.0)) {
      throw std::invalid_argument("epsilon_sweep: epsilons must be positive");
    }
    if (i > 0 && !(request.epsilons[i] < request.epsilons[i - 1])) {
      throw std::invalid_argument("epsilon_sweep: epsilons must be strictly decreasing");
    }
  }
  if (request.n_cells < 2) {
    throw std::invalid_argument("epsilon_sweep: need at least two cells");
  }
  if (!(request.t_end > 0.0)) {
    throw std::invalid_argument("epsilon_sweep: t_end must be positive");
  }
  if (!request.initial) {
    throw std::invalid_argument("epsilon_sweep: missing initial-data generator");
  }

  ErrorSeries series;
  series.epsilons = request.epsilons;
  series.n_cells_used = request.n_cells;
  series.errors = run_ladder(request, request.n_cells);
  fit_order(series);
  if (!series.monotone && request.allow_refine && request.epsilons.size() >= 2) {
    // one refinement pass: halving dx also halves the kappa = dx/epsilon
    // bias that can mask the epsilon trend on coarse grids
    series.n_cells_used = 2 * request.n_cells;
    series.errors = run_ladder(request, series.n_cells_used);
    series.refined = true;
    fit_order(series);
  }
  return series;
}

SandwichReport sandwich_check(const MonotoneBracket& bracket, const Trajectory& traj) {
  if (!(bracket.lower.grid == traj.grid)) {
    throw std::invalid_argument("sandwich_check: bracket and trajectory grids differ");
  }
  const Grid& grid = traj.grid;
  SandwichReport report;
  report.slack = 5.0 * (bracket.gap + grid.dx);

  for (std::size_t s = 0; s < traj.times.size(); ++s) {
    double t = traj.times[s];
    long long step = std::llround(t / grid.dx);
    if (step < 0 || static_cast<std::size_t>(step) >= bracket.lower.times.size() ||
        std::abs(bracket.lower.times[step] - t) > 1e-12 * std::max(1.0, std::abs(t))) {
      throw std::invalid_argument(
          "sandwich_check: trajectory sample times do not line up with the bracket");
    }
    const KineticState& lo = bracket.lower.states[step];
    const KineticState& hi = bracket.upper.states[step];
    const KineticState& f = traj.states[s];
    for (int i = 0; i < grid.n_cells; ++i) {
      report.violation = std::max({report.violation, lo.f_plus[i] - f.f_plus[i],
                                   f.f_plus[i] - hi.f_plus[i], lo.f_minus[i] - f.f_minus[i],
                                   f.f_minus[i] - hi.f_minus[i]});
    }
  }
  report.pass = report.violation <= report.slack;
  return report;
}

}  // namespace kinalign
