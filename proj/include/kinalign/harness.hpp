#pragma once
// Experiment harness: structural condition checks on aligned-regime data,
// error norms against reference solutions, epsilon ladders with order fits,
// and containment of a solver run inside a monotone bracket.

#include <functional>
#include <vector>

#include "kinalign/asymptotics.hpp"
#include "kinalign/monotone.hpp"
#include "kinalign/solver.hpp"
#include "kinalign/types.hpp"

namespace kinalign {

// Conditions on a datum F relative to the majority orientation k. Reports,
// never throws.
struct ConditionReport {
  double mu = 0.0;                    // min over cells and components of F
  bool minority_positive = false;     // min_x F(-k, x) > 0
  bool pointwise_domination = false;  // F(k, x) > c_gamma * F(-k, x) everywhere
  bool uniform_domination = false;    // min_x F(k) >= c_gamma * max_x F(-k)
  double c_gamma_used = 0.0;
};

ConditionReport check_conditions(const KineticState& F, Orientation k, double gamma);

// Largest over sample indices of norm_sup(states[i] - reference(i)).
double sup_error(const Trajectory& traj,
                 const std::function<KineticState(std::size_t)>& reference);
double sup_error(const Trajectory& traj, const std::vector<KineticState>& reference);

struct ErrorSeries {
  std::vector<double> epsilons;
  std::vector<double> errors;   // sup-in-time error per epsilon
  double fitted_order = 0.0;    // least-squares slope of log error vs log epsilon
  double fit_residual = 0.0;    // RMS log residual of that fit
  bool has_order = false;
  bool monotone = false;        // errors strictly decrease along the ladder
  int n_cells_used = 0;
  bool refined = false;         // grid was doubled once after a non-monotone pass
};

// Fills fitted_order / fit_residual / has_order / monotone from the stored
// (epsilons, errors).
void fit_order(ErrorSeries& series);

enum class SweepKind {
  aligned_hyperbolic,   // solver vs wave-plus-layer approximant, sup norm
  diffusive_parabolic,  // solver density vs heat flow, sup norm
};

struct SweepRequest {
  SweepKind kind = SweepKind::aligned_hyperbolic;
  double gamma = 2.0;
  std::vector<double> epsilons;  // strictly decreasing
  Orientation k = Orientation::plus;  // aligned regime only
  int n_cells = 0;
  double t_end = 1.0;
  int jobs = 1;
  bool allow_refine = true;   // double the grid once if errors fail to decrease
  bool unstable_demo = false; // lets gamma > 1 run the backward-heat comparison
  // Evaluated per grid so a refinement pass regenerates the datum.
  std::function<KineticState(const Grid&)> initial;
};

// Runs the ladder (one solve per epsilon, `jobs` in parallel) and fits the
// observed order. Aligned regime requires gamma > 1 and uniform domination of
// the minority component; diffusive regime requires a locally equilibrated
// datum (equal components).
ErrorSeries epsilon_sweep(const SweepRequest& request);

struct SandwichReport {
  bool pass = false;
  double violation = 0.0;  // worst pointwise escape from the bracket
  double slack = 0.0;      // allowance 5 * (gap + dx)
};

// Checks lower <= f <= upper at every trajectory sample, matching samples to
// bracket steps by time. Slack covers the unconverged part of the bracket
// plus one cell of splitting error.
SandwichReport sandwich_check(const MonotoneBracket& bracket, const Trajectory& traj);

}  // namespace kinalign
