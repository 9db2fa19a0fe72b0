#pragma once
// Kinetic solvers: exact-shift transport with per-cell relaxation (operator
// splitting), the probabilistic microscopic update rule, and the
// space-homogeneous dynamics.

#include <utility>
#include <vector>

#include "kinalign/types.hpp"

namespace kinalign {

// Sampled solver output. times[0] is always 0 and states[0] the initial datum.
struct Trajectory {
  std::vector<double> times;
  std::vector<KineticState> states;
  ModelParams params;
  Grid grid;
  double initial_min = 0.0;    // min over cells and components of the datum
  double min_seen = 0.0;       // min entry over the whole run
  double mass_drift = 0.0;     // max |mass(t) - mass(0)| / max(mass(0), eps)
};

// Coordinate change along free streaming: out(j, x) = f(j, x + j*t) when
// inverse = false, and its inverse otherwise. t must be an integer multiple
// of dx (the shift is a cell permutation).
KineticState sharp_transform(const KineticState& f, double t, const Grid& grid, bool inverse);

// One step of the microscopic stochastic-particle update: each particle keeps
// or flips its orientation with a probability built from neighborhood sums
// (cells at distance dx), then moves one cell in its (new) direction.
// Requires dt = dx. Conserves mass exactly and preserves nonnegativity.
KineticState micro_step(const KineticState& f, double dt, double gamma, const Grid& grid);

// Relaxation of both components of one cell under the collision dynamics for
// a duration dt, with rate multiplier `stiffness`. The cell mass m = f_plus +
// f_minus is conserved by construction; only the difference is integrated, so
// swapping the two inputs yields the exactly mirrored output bit for bit.
std::pair<double, double> relax_pair(double f_plus, double f_minus, double dt, double gamma,
                                     double stiffness, double rtol = 1e-10);

// Scalar form: evolves w = f(j) with the cell mass m frozen; returns w(dt).
// Output stays in [0, m].
double relax_cell(double m, double w, double dt, double gamma, double stiffness,
                  double rtol = 1e-10);

struct SolveOptions {
  int sample_every = 1;        // keep every k-th step (0 means auto: >= 50 samples)
  double dense_until = 0.0;    // additionally keep every step with t <= this
  long long max_steps = 10000000;
  double ode_rtol = 1e-10;
};

// Splitting solver for the scaled kinetic system on the torus. Hyperbolic
// scaling: transport at speed j with collision rate 1/epsilon, dt = dx.
// Parabolic scaling: transport at speed j/epsilon with rate 1/epsilon^2,
// dt = epsilon*dx. Either way one step shifts each component by exactly one
// cell, so transport carries no discretization error.
Trajectory solve_kinetic(const KineticState& f0, const ModelParams& params, const Grid& grid,
                         double t_end, const SolveOptions& options);
Trajectory solve_kinetic(const KineticState& f0, const ModelParams& params, const Grid& grid,
                         double t_end, int sample_every = 1);

struct HomogeneousState {
  double f1 = 0.0;
  double f_minus1 = 0.0;
};

// Space-homogeneous collision dynamics. The sum f1 + f_minus1 is conserved
// exactly (only the difference is integrated). Returns (time, state) samples
// at n_samples uniform times including 0 and t_end.
std::vector<std::pair<double, HomogeneousState>> solve_homogeneous(const HomogeneousState& h0,
                                                                   double gamma, double t_end,
                                                                   int n_samples = 201);

}  // namespace kinalign
