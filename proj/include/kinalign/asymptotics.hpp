#pragma once
// Macroscopic limit objects: diffusion coefficients per scaling regime, the
// aligned traveling wave, the initial-layer relaxation with its decay
// certificate, the composite bulk+layer approximant, and residuals of the
// hydrodynamic/kinetic split.

#include <utility>
#include <vector>

#include "kinalign/types.hpp"

namespace kinalign {

enum class DiffusionRegime {
  euler_hyperbolic,   // leading order of the hyperbolic scaling: no diffusion
  ns_hyperbolic,      // first correction of the hyperbolic scaling
  parabolic_zeroth,   // leading order of the parabolic scaling
};

// epsilon/(1-gamma) for ns_hyperbolic, 1/(1-gamma) for parabolic_zeroth, 0
// for euler_hyperbolic. Negative for gamma > 1 (backward heat flow).
double diffusion_coefficient(double gamma, double epsilon, DiffusionRegime regime);

struct DiffusionSpec {
  double coefficient = 0.0;
  DiffusionRegime regime = DiffusionRegime::euler_hyperbolic;

  // Refuses a negative coefficient unless unstable_demo is set.
  static DiffusionSpec make(double gamma, double epsilon, DiffusionRegime regime,
                            bool unstable_demo = false);
};

// Profile transported at speed k: out(x) = F(x - k*t). t must be an integer
// multiple of dx so the shift is exact.
MacroField traveling_wave(const MacroField& F, Orientation k, double t, const Grid& grid);

// Minority-component relaxation on the fast time scale: for each cell x the
// scalar ODE
//   d/dtau h = ((rho0-h) h^gamma - h (rho0-h)^gamma) / ((rho0-h)^gamma + h^gamma)
// with h(0) = h0(x) and rho0(x) frozen.
struct LayerProfile {
  std::vector<double> taus;
  std::vector<MacroField> values;  // h(tau, .) per sample
  MacroField rho0;
  MacroField h0;
};

// Requires gamma > 1, h0 > 0 and rho0 > c_gamma * h0 pointwise (c_gamma from
// default_c_gamma). Output is strictly positive and decreasing in tau.
LayerProfile initial_layer_solve_at(const MacroField& rho0, const MacroField& h0, double gamma,
                                    const std::vector<double>& taus);
LayerProfile initial_layer_solve(const MacroField& rho0, const MacroField& h0, double gamma,
                                 double tau_end, int n_samples = 121);

// Domination threshold: the smallest ratio rho0/h0 (never below 2) for which
// the sufficient spatial-derivative decay inequality holds along the layer,
// found by bisection at 1% resolution. gamma = 2 lands at 3 + sqrt(3).
double default_c_gamma(double gamma);

struct LayerCertificate {
  double theta_max = 0.0;  // worst-case h/(rho0-h) over the data
  double delta = 0.0;      // certified decay rate (1-theta^(gamma-1))/(1+theta^gamma)
  double c_gamma = 0.0;
  bool floor_positive = false;      // min h0 > 0
  bool pointwise_dominated = false; // rho0 > c_gamma * h0 in every cell
  bool uniform_dominated = false;   // min rho0 >= c_gamma * max h0
  bool dominated = false;    // min rho0 > max h0, so theta_max is meaningful
  bool satisfiable = false;  // all of the above and delta > 0
};

LayerCertificate layer_certificate(const MacroField& rho0, const MacroField& h0, double gamma,
                                   double c_gamma);

// Bulk traveling wave combined with the initial-layer corrector:
//   component  k: rho_bulk(x - k t) - h(t/epsilon, x)
//   component -k: h(t/epsilon, x)
// where rho_bulk is the initial total density F(k) + F(-k). For t >> epsilon
// the layer part is gone and the state is the aligned wave carrying all of
// the initial mass. The majority profile is kept separately so that at t = 0
// the composite returns the datum bit for bit (the majority component is
// assembled as F(k,x-kt) + (F(-k,x-kt) - h), whose layer part cancels
// exactly at 0).
struct CompositeApproximant {
  Orientation k = Orientation::plus;
  double gamma = 2.0;
  double epsilon = 1.0;
  Grid grid;
  MacroField rho_bulk;
  MacroField majority0;        // F(k, .) at t = 0
  LayerProfile layer;          // sampled at taus = times/epsilon
  std::vector<double> times;

  KineticState at(std::size_t time_index) const;
};

CompositeApproximant build_aligned_approximant(const KineticState& F, Orientation k, double gamma,
                                               double epsilon, const Grid& grid,
                                               const std::vector<double>& times);
// Single-time convenience wrapper.
KineticState aligned_approximant(const KineticState& F, Orientation k, double gamma,
                                 double epsilon, double t, const Grid& grid);

// Collision term of the kinetic component equation in the hydrodynamic/
// kinetic split (rho = total density, w = minority component):
//   q = ((rho-w) w^gamma - w (rho-w)^gamma) / ((rho-w)^gamma + w^gamma).
// Exactly zero at w = 0 and at w = rho.
MacroField split_collision_term(const MacroField& rho, const MacroField& w, double gamma);

// Residuals of the two split equations for a candidate pair (rho, w), with
// time derivatives eliminated: rho is assumed transported at speed k (so its
// equation leaves -2k d/dx w) and w is assumed quasi-static. Returns
// (sup |2 d/dx w|, sup |q|). Spatial derivatives are central differences.
std::pair<double, double> chapman_enskog_residual(const MacroField& rho, const MacroField& w,
                                                  double gamma, double epsilon, const Grid& grid);

// Fits sup_x |d/dx h(tau, .)| ~ C e^{-delta1 tau} by least squares on the
// log, requiring at least three decades of decay; reports the fitted rate,
// the prefactor relative to `scale` (typically sup F + sup |F'|), and the RMS
// log residual. Data with identically vanishing derivative is flagged
// trivial.
struct DecayFit {
  bool trivial = false;
  double delta1 = 0.0;
  double constant = 0.0;
  double residual = 0.0;
};

DecayFit layer_derivative_decay(const LayerProfile& profile, const Grid& grid, double scale);

}  // namespace kinalign
