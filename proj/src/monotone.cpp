#include "kinalign/monotone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace kinalign {

namespace {

// space-time field sampled at every step: field[m] is the state at t_m = m*dt
using TimeField = std::vector<KineticState>;

double pairwise_gap(const TimeField& lo, const TimeField& hi, const Grid& grid) {
  double g = 0.0;
  for (std::size_t m = 0; m < lo.size(); ++m) {
    double s = 0.0;
    for (std::size_t i = 0; i < lo[m].size(); ++i) {
      s += std::abs(hi[m].f_plus[i] - lo[m].f_plus[i]) +
           std::abs(hi[m].f_minus[i] - lo[m].f_minus[i]);
    }
    g = std::max(g, s * grid.dx);
  }
  return g;
}

// max over all samples of (a - b), i.e. how far a exceeds b
double max_excess(const TimeField& a, const TimeField& b) {
  double v = -std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < a.size(); ++m) {
    for (std::size_t i = 0; i < a[m].size(); ++i) {
      v = std::max(v, a[m].f_plus[i] - b[m].f_plus[i]);
      v = std::max(v, a[m].f_minus[i] - b[m].f_minus[i]);
    }
  }
  return v;
}

struct Coefficients {
  double damping;
  double source;
};

// Damping/source pair of the linear equation an iterate solves, built from
// the previous sub/supersolution pair (a, b) at one point. For the new
// iterate y the equation along characteristics is
//   d/dt y#(j) + P y#(j) = S,  P = b^gamma(-j) / (a^gamma(j) + b^gamma(-j)),
//                              S = a^gamma(j) a(-j) / (a^gamma(j) + b^gamma(-j)),
// where a is the iterate's own predecessor and b the opposite one.
Coefficients coeffs_at(const KineticState& a, const KineticState& b, Orientation j, int cell,
                       double gamma) {
  double aj = a.component(j)[cell];
  double amj = a.component(flip(j))[cell];
  double bmj = b.component(flip(j))[cell];
  double den = pow_gamma(aj, gamma) + pow_gamma(bmj, gamma);
  if (!(den > 0.0)) return {0.0, 0.0};
  return {pow_gamma(bmj, gamma) / den, pow_gamma(aj, gamma) * amj / den};
}

// Solves the linear characteristic equations for a full iterate given the
// coefficient fields of its predecessor pair. Exponential steps with
// trapezoid-averaged frozen coefficients: the update is increasing in the
// source, decreasing in the damping and increasing in the previous value,
// which is exactly what the ordering argument needs.
TimeField advance(const KineticState& f0, const TimeField& own_prev, const TimeField& other_prev,
                  double gamma, const Grid& grid, double dt) {
  std::size_t samples = own_prev.size();
  int n = grid.n_cells;
  TimeField out(samples, KineticState(n));
  out[0] = f0;
  for (Orientation j : {Orientation::plus, Orientation::minus}) {
    int js = sign(j);
    for (int i = 0; i < n; ++i) {
      double y = f0.component(j)[i];
      for (std::size_t m = 0; m + 1 < samples; ++m) {
        int foot0 = grid.wrap(i + js * static_cast<long long>(m));
        int foot1 = grid.wrap(i + js * static_cast<long long>(m + 1));
        Coefficients c0 = coeffs_at(own_prev[m], other_prev[m], j, foot0, gamma);
        Coefficients c1 = coeffs_at(own_prev[m + 1], other_prev[m + 1], j, foot1, gamma);
        double p = 0.5 * (c0.damping + c1.damping);
        double s = 0.5 * (c0.source + c1.source);
        double decay = std::exp(-p * dt);
        double weight = p > 1e-300 ? -std::expm1(-p * dt) / p : dt;
        y = y * decay + s * weight;
        out[m + 1].component(j)[foot1] = y;
      }
    }
  }
  return out;
}

Trajectory field_to_trajectory(const TimeField& field, const std::vector<double>& times,
                               const ModelParams& params, const Grid& grid) {
  Trajectory t;
  t.times = times;
  t.states = field;
  t.params = params;
  t.grid = grid;
  return t;
}

}  // namespace

MonotoneBracket monotone_solve(const KineticState& f0, double gamma, const Grid& grid,
                               double t_end, double tol, int max_iter) {
  if (!(gamma > 0.0) || gamma == 1.0) {
    throw std::invalid_argument("monotone_solve: gamma must be positive and different from 1");
  }
  if (!(t_end > 0.0) || !(tol > 0.0) || max_iter < 1) {
    throw std::invalid_argument("monotone_solve: need t_end > 0, tol > 0, max_iter >= 1");
  }
  check_matches_grid(f0, grid, "monotone_solve");
  check_finite(f0, "monotone_solve");
  double mu = min_value(f0);
  if (!(mu > 0.0)) {
    throw PreconditionError("monotone_solve: initial data must be strictly positive");
  }

  double dt = grid.dx;
  long long steps = std::llround(t_end / dt);
  if (std::abs(steps * dt - t_end) > 1e-9 * std::max(1.0, t_end)) {
    throw PreconditionError("monotone_solve: t_end is not an integer number of steps");
  }
  std::size_t samples = static_cast<std::size_t>(steps) + 1;
  int n = grid.n_cells;
  std::vector<double> times(samples);
  for (std::size_t m = 0; m < samples; ++m) times[m] = static_cast<double>(m) * dt;

  // Supersolution seed: free growth where every collision feeds mass in,
  //   d/dt h0#(t, j, x) = h0#(t, -j, x),
  // solved in closed form with cosh/sinh along the paired characteristics
  // through each starting cell.
  TimeField h(samples, KineticState(n));
  for (std::size_t m = 0; m < samples; ++m) {
    double ch = std::cosh(times[m]);
    double sh = std::sinh(times[m]);
    for (int i = 0; i < n; ++i) {
      long long off = static_cast<long long>(m);
      h[m].f_plus[grid.wrap(i + off)] = f0.f_plus[i] * ch + f0.f_minus[i] * sh;
      h[m].f_minus[grid.wrap(i - off)] = f0.f_minus[i] * ch + f0.f_plus[i] * sh;
    }
  }

  // Subsolution seed: pure decay, g1(t, j, x) = f0(j, x - j t) e^{-t}.
  TimeField g(samples, KineticState(n));
  for (std::size_t m = 0; m < samples; ++m) {
    double e = std::exp(-times[m]);
    for (int i = 0; i < n; ++i) {
      long long off = static_cast<long long>(m);
      g[m].f_plus[grid.wrap(i + off)] = f0.f_plus[i] * e;
      g[m].f_minus[grid.wrap(i - off)] = f0.f_minus[i] * e;
    }
  }

  MonotoneBracket bracket;
  bracket.mu = mu;

  ModelParams params;
  params.gamma = gamma;
  params.epsilon = 1.0;
  params.scaling = Scaling::hyperbolic;
  bracket.seed_lower = field_to_trajectory(g, times, params, grid);
  bracket.seed_upper = field_to_trajectory(h, times, params, grid);

  // First supersolution refinement comes from the pair (zero, h0).
  TimeField zero(samples, KineticState(n));
  h = advance(f0, h, zero, gamma, grid, dt);

  bracket.gap = pairwise_gap(g, h, grid);
  bracket.gap_history.push_back(bracket.gap);
  bracket.iterations = 1;
  bracket.max_ordering_violation = std::max(0.0, max_excess(g, h));

  while (bracket.gap > tol && bracket.iterations < max_iter) {
    TimeField g_next = advance(f0, g, h, gamma, grid, dt);
    TimeField h_next = advance(f0, h, g, gamma, grid, dt);
    double viol = std::max({max_excess(g, g_next),      // lower must not decrease
                            max_excess(h_next, h),      // upper must not increase
                            max_excess(g_next, h_next)});
    bracket.max_ordering_violation = std::max(bracket.max_ordering_violation, std::max(0.0, viol));
    g = std::move(g_next);
    h = std::move(h_next);
    bracket.gap = pairwise_gap(g, h, grid);
    bracket.gap_history.push_back(bracket.gap);
    ++bracket.iterations;
  }
  bracket.converged = bracket.gap <= tol;

  bracket.lower = field_to_trajectory(g, times, params, grid);
  bracket.upper = field_to_trajectory(h, times, params, grid);
  return bracket;
}

}  // namespace kinalign
