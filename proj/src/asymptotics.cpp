#include "kinalign/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kinalign/ode.hpp"

namespace kinalign {

double diffusion_coefficient(double gamma, double epsilon, DiffusionRegime regime) {
  if (!(gamma > 0.0) || gamma == 1.0) {
    throw std::invalid_argument("diffusion_coefficient: gamma must be positive and != 1");
  }
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("diffusion_coefficient: epsilon must be positive");
  }
  switch (regime) {
    case DiffusionRegime::euler_hyperbolic:
      return 0.0;
    case DiffusionRegime::ns_hyperbolic:
      return epsilon / (1.0 - gamma);
    case DiffusionRegime::parabolic_zeroth:
      return 1.0 / (1.0 - gamma);
  }
  throw std::logic_error("diffusion_coefficient: unknown regime");
}

DiffusionSpec DiffusionSpec::make(double gamma, double epsilon, DiffusionRegime regime,
                                  bool unstable_demo) {
  DiffusionSpec spec;
  spec.coefficient = diffusion_coefficient(gamma, epsilon, regime);
  spec.regime = regime;
  if (spec.coefficient < 0.0 && !unstable_demo) {
    throw PreconditionError(
        "DiffusionSpec: gamma > 1 gives a backward heat equation (coefficient " +
        std::to_string(spec.coefficient) + "); pass the unstable-demo flag to build it anyway");
  }
  return spec;
}

MacroField traveling_wave(const MacroField& F, Orientation k, double t, const Grid& grid) {
  if (F.size() != static_cast<std::size_t>(grid.n_cells)) {
    throw std::invalid_argument("traveling_wave: profile size does not match grid");
  }
  double ratio = t / grid.dx;
  long long s = std::llround(ratio);
  if (std::abs(t - s * grid.dx) > 1e-12 * std::max(1.0, std::abs(t))) {
    throw PreconditionError("traveling_wave: t is not an integer multiple of dx");
  }
  if (k == Orientation::minus) s = -s;
  MacroField out(F.size());
  for (int i = 0; i < grid.n_cells; ++i) out.rho[i] = F.rho[grid.wrap(i - s)];
  return out;
}

namespace {

double layer_rhs(double h, double rho0, double gamma) {
  double rest = rho0 - h;
  double a = pow_gamma(rest, gamma);
  double b = pow_gamma(h, gamma);
  return (rest * b - h * a) / (a + b);
}

}  // namespace

LayerProfile initial_layer_solve_at(const MacroField& rho0, const MacroField& h0, double gamma,
                                    const std::vector<double>& taus) {
  if (rho0.size() != h0.size()) {
    throw std::invalid_argument("initial_layer_solve: rho0 and h0 sizes differ");
  }
  if (!(gamma > 1.0)) {
    throw PreconditionError("initial_layer_solve: requires gamma > 1");
  }
  if (taus.empty() || taus.front() != 0.0) {
    throw std::invalid_argument("initial_layer_solve: tau samples must start at 0");
  }
  double c_gamma = default_c_gamma(gamma);
  for (std::size_t i = 0; i < h0.size(); ++i) {
    if (!(h0.rho[i] > 0.0)) {
      throw PreconditionError("initial_layer_solve: h0 must be strictly positive, cell " +
                              std::to_string(i));
    }
    if (!(rho0.rho[i] > c_gamma * h0.rho[i])) {
      throw PreconditionError("initial_layer_solve: domination rho0 > c_gamma*h0 fails at cell " +
                              std::to_string(i));
    }
  }

  LayerProfile profile;
  profile.taus = taus;
  profile.rho0 = rho0;
  profile.h0 = h0;
  profile.values.assign(taus.size(), MacroField(h0.size()));
  OdeOptions opt;
  for (std::size_t i = 0; i < h0.size(); ++i) {
    double r = rho0.rho[i];
    opt.atol = 1e-14 * r;
    std::vector<double> h =
        integrate_at([r, gamma](double x) { return layer_rhs(x, r, gamma); }, h0.rho[i], taus, opt);
    for (std::size_t s = 0; s < taus.size(); ++s) profile.values[s].rho[i] = h[s];
  }
  return profile;
}

LayerProfile initial_layer_solve(const MacroField& rho0, const MacroField& h0, double gamma,
                                 double tau_end, int n_samples) {
  if (!(tau_end > 0.0) || n_samples < 2) {
    throw std::invalid_argument("initial_layer_solve: need tau_end > 0 and n_samples >= 2");
  }
  std::vector<double> taus(n_samples);
  for (int i = 0; i < n_samples; ++i) taus[i] = tau_end * i / (n_samples - 1);
  return initial_layer_solve_at(rho0, h0, gamma, taus);
}

namespace {

// Scaled form of the sufficient inequality for spatial-derivative decay of
// the layer, in the ratio variable theta = h/(rho0-h):
//   -(1-theta)(1-theta^(gamma-1)) + (gamma-1)(theta + theta^(gamma-1)) < 0.
// Negative at theta = 0, strictly increasing on (0,1) for gamma > 1.
double derivative_decay_margin(double theta, double gamma) {
  double tg1 = std::pow(theta, gamma - 1.0);
  return -(1.0 - theta) * (1.0 - tg1) + (gamma - 1.0) * (theta + tg1);
}

}  // namespace

double default_c_gamma(double gamma) {
  if (!(gamma > 0.0) || gamma == 1.0) {
    throw std::invalid_argument("default_c_gamma: gamma must be positive and != 1");
  }
  if (gamma < 1.0) return 2.0;  // the aligned-layer machinery only runs for gamma > 1
  double lo = 1e-9, hi = 1.0 - 1e-9;
  if (!(derivative_decay_margin(hi, gamma) > 0.0)) return 2.0;
  // bisect for the sign change; stop once the implied ratio is pinned to 1%
  while ((1.0 + 1.0 / lo) / (1.0 + 1.0 / hi) > 1.01) {
    double mid = 0.5 * (lo + hi);
    if (derivative_decay_margin(mid, gamma) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::max(2.0, 1.0 + 1.0 / lo);
}

LayerCertificate layer_certificate(const MacroField& rho0, const MacroField& h0, double gamma,
                                   double c_gamma) {
  if (rho0.size() != h0.size() || rho0.size() == 0) {
    throw std::invalid_argument("layer_certificate: rho0 and h0 must be same nonzero size");
  }
  if (!(gamma > 1.0)) {
    throw PreconditionError("layer_certificate: requires gamma > 1");
  }
  double min_rho = *std::min_element(rho0.rho.begin(), rho0.rho.end());
  double max_h = *std::max_element(h0.rho.begin(), h0.rho.end());
  double min_h = *std::min_element(h0.rho.begin(), h0.rho.end());

  LayerCertificate cert;
  cert.c_gamma = c_gamma;
  cert.floor_positive = min_h > 0.0;
  cert.uniform_dominated = min_rho >= c_gamma * max_h;
  cert.pointwise_dominated = true;
  for (std::size_t i = 0; i < rho0.size(); ++i) {
    if (!(rho0.rho[i] > c_gamma * h0.rho[i])) cert.pointwise_dominated = false;
  }
  cert.dominated = min_rho > max_h && max_h > 0.0;
  if (!cert.dominated) {
    cert.theta_max = std::numeric_limits<double>::infinity();
    return cert;
  }
  cert.theta_max = max_h / (min_rho - max_h);
  cert.delta = (1.0 - std::pow(cert.theta_max, gamma - 1.0)) /
               (1.0 + std::pow(cert.theta_max, gamma));
  cert.satisfiable = cert.delta > 0.0 && cert.floor_positive && cert.pointwise_dominated &&
                     cert.uniform_dominated;
  return cert;
}

KineticState CompositeApproximant::at(std::size_t time_index) const {
  if (time_index >= times.size()) {
    throw std::out_of_range("CompositeApproximant::at: time index out of range");
  }
  MacroField bulk_major = traveling_wave(majority0, k, times[time_index], grid);
  KineticState out(grid.n_cells);
  const bool has_layer = !layer.values.empty();
  if (!has_layer) {
    out.component(k) = bulk_major.rho;
    return out;
  }
  MacroField bulk_minor = traveling_wave(layer.h0, k, times[time_index], grid);
  for (int i = 0; i < grid.n_cells; ++i) {
    double h = layer.values[time_index].rho[i];
    // grouped so the layer part cancels bitwise at t = 0
    out.component(k)[i] = bulk_major.rho[i] + (bulk_minor.rho[i] - h);
    out.component(flip(k))[i] = h;
  }
  return out;
}

CompositeApproximant build_aligned_approximant(const KineticState& F, Orientation k, double gamma,
                                               double epsilon, const Grid& grid,
                                               const std::vector<double>& times) {
  check_matches_grid(F, grid, "aligned_approximant");
  check_finite(F, "aligned_approximant");
  check_nonnegative(F, "aligned_approximant");
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("aligned_approximant: epsilon must be positive");
  }
  if (times.empty() || times.front() != 0.0) {
    throw std::invalid_argument("aligned_approximant: times must start at 0");
  }

  CompositeApproximant approx;
  approx.k = k;
  approx.gamma = gamma;
  approx.epsilon = epsilon;
  approx.grid = grid;
  approx.times = times;
  // The bulk profile carries the whole initial mass; the layer moves the
  // minority share over to the majority orientation on the fast scale.
  approx.rho_bulk = MacroField(grid.n_cells);
  approx.majority0 = MacroField(grid.n_cells);
  MacroField h0(grid.n_cells);
  double max_h0 = 0.0;
  for (int i = 0; i < grid.n_cells; ++i) {
    approx.rho_bulk.rho[i] = F.component(k)[i] + F.component(flip(k))[i];
    approx.majority0.rho[i] = F.component(k)[i];
    h0.rho[i] = F.component(flip(k))[i];
    max_h0 = std::max(max_h0, h0.rho[i]);
  }
  if (max_h0 == 0.0) {
    // exactly aligned datum: the wave alone is an exact solution, no layer
    return approx;
  }
  if (!(gamma > 1.0)) {
    throw PreconditionError("aligned_approximant: requires gamma > 1");
  }
  LayerCertificate cert = layer_certificate(approx.rho_bulk, h0, gamma, default_c_gamma(gamma));
  if (!cert.satisfiable) {
    std::string why = !cert.floor_positive         ? "minority component has a zero cell"
                      : !cert.pointwise_dominated  ? "pointwise domination fails"
                      : !cert.uniform_dominated    ? "min/max domination fails"
                                                   : "certified decay rate is not positive";
    throw PreconditionError("aligned_approximant: layer decay certificate fails (" + why + ")");
  }
  std::vector<double> taus(times.size());
  for (std::size_t s = 0; s < times.size(); ++s) taus[s] = times[s] / epsilon;
  approx.layer = initial_layer_solve_at(approx.rho_bulk, h0, gamma, taus);
  return approx;
}

KineticState aligned_approximant(const KineticState& F, Orientation k, double gamma,
                                 double epsilon, double t, const Grid& grid) {
  std::vector<double> times;
  if (t == 0.0) {
    times = {0.0};
  } else {
    times = {0.0, t};
  }
  CompositeApproximant approx = build_aligned_approximant(F, k, gamma, epsilon, grid, times);
  return approx.at(times.size() - 1);
}

MacroField split_collision_term(const MacroField& rho, const MacroField& w, double gamma) {
  if (rho.size() != w.size()) {
    throw std::invalid_argument("split_collision_term: rho and w sizes differ");
  }
  MacroField q(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (!(w.rho[i] >= 0.0) || !(w.rho[i] <= rho.rho[i])) {
      throw PreconditionError("split_collision_term: need 0 <= w <= rho, cell " +
                              std::to_string(i));
    }
    if (rho.rho[i] <= 0.0) {
      q.rho[i] = 0.0;
      continue;
    }
    q.rho[i] = layer_rhs(w.rho[i], rho.rho[i], gamma);
  }
  return q;
}

std::pair<double, double> chapman_enskog_residual(const MacroField& rho, const MacroField& w,
                                                  double gamma, double epsilon, const Grid& grid) {
  if (rho.size() != static_cast<std::size_t>(grid.n_cells) || rho.size() != w.size()) {
    throw std::invalid_argument("chapman_enskog_residual: field sizes do not match grid");
  }
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("chapman_enskog_residual: epsilon must be positive");
  }
  MacroField q = split_collision_term(rho, w, gamma);
  double hydro = 0.0, collision = 0.0;
  int n = grid.n_cells;
  for (int i = 0; i < n; ++i) {
    // d/dt rho = -k d/dx rho along the wave, so the density equation leaves
    // only the flux of the minority component.
    double dw = (w.rho[grid.wrap(i + 1)] - w.rho[grid.wrap(i - 1)]) / (2.0 * grid.dx);
    hydro = std::max(hydro, std::abs(2.0 * dw));
    collision = std::max(collision, std::abs(q.rho[i]));
  }
  return {hydro, collision};
}

DecayFit layer_derivative_decay(const LayerProfile& profile, const Grid& grid, double scale) {
  if (profile.values.empty() || profile.values.front().size() != static_cast<std::size_t>(grid.n_cells)) {
    throw std::invalid_argument("layer_derivative_decay: profile does not match grid");
  }
  if (!(scale > 0.0)) {
    throw std::invalid_argument("layer_derivative_decay: scale must be positive");
  }
  std::size_t samples = profile.taus.size();
  std::vector<double> dsup(samples, 0.0);
  int n = grid.n_cells;
  for (std::size_t s = 0; s < samples; ++s) {
    for (int i = 0; i < n; ++i) {
      double d = (profile.values[s].rho[grid.wrap(i + 1)] - profile.values[s].rho[grid.wrap(i - 1)]) /
                 (2.0 * grid.dx);
      dsup[s] = std::max(dsup[s], std::abs(d));
    }
  }
  double peak = *std::max_element(dsup.begin(), dsup.end());
  DecayFit fit;
  if (peak <= 1e-13 * scale) {
    fit.trivial = true;  // x-independent layer, nothing to fit
    return fit;
  }
  // fit only above the noise floor of the integrator
  double floor = peak * 1e-12;
  std::vector<double> ts, logs;
  for (std::size_t s = 0; s < samples; ++s) {
    if (dsup[s] > floor) {
      ts.push_back(profile.taus[s]);
      logs.push_back(std::log(dsup[s]));
    }
  }
  double lo = *std::min_element(logs.begin(), logs.end());
  double hi = *std::max_element(logs.begin(), logs.end());
  if (hi - lo < 3.0 * std::log(10.0)) {
    throw PreconditionError(
        "layer_derivative_decay: needs at least three decades of decay in the sampled window");
  }
  double mt = 0.0, ml = 0.0;
  for (std::size_t s = 0; s < ts.size(); ++s) {
    mt += ts[s];
    ml += logs[s];
  }
  mt /= ts.size();
  ml /= ts.size();
  double num = 0.0, den = 0.0;
  for (std::size_t s = 0; s < ts.size(); ++s) {
    num += (ts[s] - mt) * (logs[s] - ml);
    den += (ts[s] - mt) * (ts[s] - mt);
  }
  double slope = num / den;
  fit.delta1 = -slope;
  double rss = 0.0;
  double cmax = 0.0;
  for (std::size_t s = 0; s < ts.size(); ++s) {
    double r = logs[s] - (ml + slope * (ts[s] - mt));
    rss += r * r;
    cmax = std::max(cmax, dsup[s] * std::exp(fit.delta1 * ts[s]));
  }
  fit.residual = std::sqrt(rss / ts.size());
  fit.constant = cmax / scale;
  return fit;
}

}  // namespace kinalign
