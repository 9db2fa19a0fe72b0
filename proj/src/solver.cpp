#include "kinalign/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kinalign/ode.hpp"

namespace kinalign {

KineticState sharp_transform(const KineticState& f, double t, const Grid& grid, bool inverse) {
  check_matches_grid(f, grid, "sharp_transform");
  double ratio = t / grid.dx;
  long long s = std::llround(ratio);
  if (std::abs(t - s * grid.dx) > 1e-12 * std::max(1.0, std::abs(t))) {
    throw PreconditionError("sharp_transform: t = " + std::to_string(t) +
                            " is not an integer multiple of dx");
  }
  if (inverse) s = -s;
  int n = grid.n_cells;
  KineticState out(n);
  for (int i = 0; i < n; ++i) {
    // out(+1, x_i) = f(+1, x_{i+s}); out(-1, x_i) = f(-1, x_{i-s})
    out.f_plus[i] = f.f_plus[grid.wrap(i + s)];
    out.f_minus[i] = f.f_minus[grid.wrap(i - s)];
  }
  return out;
}

KineticState micro_step(const KineticState& f, double dt, double gamma, const Grid& grid) {
  check_matches_grid(f, grid, "micro_step");
  check_finite(f, "micro_step");
  check_nonnegative(f, "micro_step");
  if (!(gamma > 0.0) || gamma == 1.0) {
    throw std::invalid_argument("micro_step: gamma must be positive and different from 1");
  }
  if (std::abs(dt - grid.dx) > 1e-12 * grid.dx) {
    throw PreconditionError("micro_step: requires dt = dx");
  }

  int n = grid.n_cells;
  // neighborhood sums at distance dx in each orientation
  std::vector<double> sp(n), sm(n);
  for (int i = 0; i < n; ++i) {
    sp[i] = f.f_plus[grid.wrap(i - 1)] + f.f_plus[grid.wrap(i + 1)];
    sm[i] = f.f_minus[grid.wrap(i - 1)] + f.f_minus[grid.wrap(i + 1)];
  }

  KineticState out(n);
  for (int i = 0; i < n; ++i) {
    double p_plus = 0.0;   // probability that a +1 particle at cell i flips
    double p_minus = 0.0;  // probability that a -1 particle at cell i flips
    if (sp[i] + sm[i] > 0.0) {
      double a = pow_gamma(sp[i], gamma);
      double b = pow_gamma(sm[i], gamma);
      p_plus = b / (a + b) * dt;
      p_minus = a / (a + b) * dt;
    }
    if (!(p_plus >= 0.0 && p_plus <= 1.0) || !(p_minus >= 0.0 && p_minus <= 1.0)) {
      throw PreconditionError("micro_step: flip probability outside [0,1] at cell " +
                              std::to_string(i));
    }
    // mass leaving cell i arrives one cell over in its new direction
    out.f_plus[grid.wrap(i + 1)] += f.f_minus[i] * p_minus + f.f_plus[i] * (1.0 - p_plus);
    out.f_minus[grid.wrap(i - 1)] += f.f_plus[i] * p_plus + f.f_minus[i] * (1.0 - p_minus);
  }
  return out;
}

std::pair<double, double> relax_pair(double f_plus, double f_minus, double dt, double gamma,
                                     double stiffness, double rtol) {
  double m = f_plus + f_minus;
  if (!(m > 0.0)) return {f_plus, f_minus};  // vacuum cell, nothing to relax
  double d0 = f_plus - f_minus;
  // d/dt (f_plus - f_minus) = 2 * stiffness * Q(+1); the right-hand side is
  // an exactly odd function of the difference, which is what makes the
  // orientation-swap symmetry hold bit for bit.
  auto rhs = [m, gamma, stiffness](double d) {
    double fp = 0.5 * (m + d);
    double fm = 0.5 * (m - d);
    double a = pow_gamma(fp, gamma);
    double b = pow_gamma(fm, gamma);
    return 2.0 * stiffness * (fm * a - fp * b) / (a + b);
  };
  OdeOptions opt;
  opt.rtol = rtol;
  opt.atol = 1e-14 * m;
  double d = integrate_scalar(rhs, d0, dt, opt);
  d = std::clamp(d, -m, m);
  return {0.5 * (m + d), 0.5 * (m - d)};
}

double relax_cell(double m, double w, double dt, double gamma, double stiffness, double rtol) {
  if (!(m >= 0.0) || !std::isfinite(m)) {
    throw PreconditionError("relax_cell: cell mass must be finite and nonnegative");
  }
  if (!(w >= 0.0) || !(w <= m)) {
    throw PreconditionError("relax_cell: w must lie in [0, m]");
  }
  if (!(dt >= 0.0) || !(stiffness > 0.0)) {
    throw std::invalid_argument("relax_cell: need dt >= 0 and stiffness > 0");
  }
  return relax_pair(w, m - w, dt, gamma, stiffness, rtol).first;
}

Trajectory solve_kinetic(const KineticState& f0, const ModelParams& params, const Grid& grid,
                         double t_end, const SolveOptions& options) {
  params.validate();
  check_matches_grid(f0, grid, "solve_kinetic");
  check_finite(f0, "solve_kinetic");
  check_nonnegative(f0, "solve_kinetic");
  if (!(t_end >= 0.0)) throw PreconditionError("solve_kinetic: t_end must be nonnegative");

  double dt, stiffness;
  if (params.scaling == Scaling::hyperbolic) {
    dt = grid.dx;
    stiffness = 1.0 / params.epsilon;
  } else {
    dt = params.epsilon * grid.dx;
    stiffness = 1.0 / (params.epsilon * params.epsilon);
  }
  long long steps = std::llround(t_end / dt);
  if (std::abs(steps * dt - t_end) > 1e-9 * std::max(1.0, t_end)) {
    throw PreconditionError("solve_kinetic: t_end is not an integer number of steps (dt = " +
                            std::to_string(dt) + ")");
  }
  if (steps > options.max_steps) {
    throw PreconditionError("solve_kinetic: step count " + std::to_string(steps) +
                            " exceeds the budget");
  }
  int stride = options.sample_every;
  if (stride <= 0) stride = static_cast<int>(std::max<long long>(1, steps / 50));

  int n = grid.n_cells;
  Trajectory traj;
  traj.params = params;
  traj.grid = grid;
  traj.initial_min = min_value(f0);
  traj.min_seen = traj.initial_min;
  double mass0 = mass(f0, grid);

  KineticState cur = f0;
  KineticState shifted(n);
  traj.times.push_back(0.0);
  traj.states.push_back(cur);

  for (long long step = 1; step <= steps; ++step) {
    // transport: each component moves one cell in its direction
    for (int i = 0; i < n; ++i) {
      shifted.f_plus[i] = cur.f_plus[grid.wrap(i - 1)];
      shifted.f_minus[i] = cur.f_minus[grid.wrap(i + 1)];
    }
    std::swap(cur, shifted);
    // collision: relax every cell with its mass frozen
    for (int i = 0; i < n; ++i) {
      double fp = cur.f_plus[i], fm = cur.f_minus[i];
      if (fp + fm <= params.chi_floor) continue;
      auto [np, nm] = relax_pair(fp, fm, dt, params.gamma, stiffness, options.ode_rtol);
      cur.f_plus[i] = np;
      cur.f_minus[i] = nm;
    }

    double t = static_cast<double>(step) * dt;
    traj.min_seen = std::min(traj.min_seen, min_value(cur));
    traj.mass_drift = std::max(
        traj.mass_drift, std::abs(mass(cur, grid) - mass0) / std::max(mass0, 1e-300));
    if (step == steps || step % stride == 0 || t <= options.dense_until) {
      traj.times.push_back(t);
      traj.states.push_back(cur);
    }
  }
  return traj;
}

Trajectory solve_kinetic(const KineticState& f0, const ModelParams& params, const Grid& grid,
                         double t_end, int sample_every) {
  SolveOptions options;
  options.sample_every = sample_every;
  return solve_kinetic(f0, params, grid, t_end, options);
}

std::vector<std::pair<double, HomogeneousState>> solve_homogeneous(const HomogeneousState& h0,
                                                                   double gamma, double t_end,
                                                                   int n_samples) {
  if (!(gamma > 0.0) || gamma == 1.0) {
    throw std::invalid_argument("solve_homogeneous: gamma must be positive and different from 1");
  }
  if (!(h0.f1 >= 0.0) || !(h0.f_minus1 >= 0.0)) {
    throw PreconditionError("solve_homogeneous: initial values must be nonnegative");
  }
  if (!(t_end >= 0.0) || n_samples < 2) {
    throw std::invalid_argument("solve_homogeneous: need t_end >= 0 and n_samples >= 2");
  }
  double c = h0.f1 + h0.f_minus1;
  std::vector<double> times(n_samples);
  for (int i = 0; i < n_samples; ++i) times[i] = t_end * i / (n_samples - 1);

  std::vector<std::pair<double, HomogeneousState>> out;
  out.reserve(times.size());
  if (c <= 0.0) {
    for (double t : times) out.push_back({t, {0.0, 0.0}});
    return out;
  }
  auto rhs = [c, gamma](double d) {
    double fp = 0.5 * (c + d);
    double fm = 0.5 * (c - d);
    double a = pow_gamma(fp, gamma);
    double b = pow_gamma(fm, gamma);
    return 2.0 * (fm * a - fp * b) / (a + b);
  };
  OdeOptions opt;
  opt.atol = 1e-14 * c;
  std::vector<double> d = integrate_at(rhs, h0.f1 - h0.f_minus1, times, opt);
  for (std::size_t i = 0; i < times.size(); ++i) {
    double di = std::clamp(d[i], -c, c);
    out.push_back({times[i], {0.5 * (c + di), 0.5 * (c - di)}});
  }
  return out;
}

}  // namespace kinalign
