#pragma once
// Adaptive embedded Runge-Kutta (Cash-Karp 4/5) for autonomous scalar ODEs.
// Shared by the per-cell relaxation, the space-homogeneous dynamics and the
// initial-layer equation; all of those are smooth scalar relaxation problems.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "kinalign/types.hpp"

namespace kinalign {

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-14;
  long long max_steps = 2000000;
};

namespace detail {

// One Cash-Karp step from w with step h: fills 5th order result and the
// embedded error estimate.
template <class Rhs>
void cash_karp_step(Rhs&& rhs, double w, double h, double k1, double* w5, double* err) {
  constexpr double b21 = 1.0 / 5.0;
  constexpr double b31 = 3.0 / 40.0, b32 = 9.0 / 40.0;
  constexpr double b41 = 3.0 / 10.0, b42 = -9.0 / 10.0, b43 = 6.0 / 5.0;
  constexpr double b51 = -11.0 / 54.0, b52 = 5.0 / 2.0, b53 = -70.0 / 27.0, b54 = 35.0 / 27.0;
  constexpr double b61 = 1631.0 / 55296.0, b62 = 175.0 / 512.0, b63 = 575.0 / 13824.0,
                   b64 = 44275.0 / 110592.0, b65 = 253.0 / 4096.0;
  constexpr double c1 = 37.0 / 378.0, c3 = 250.0 / 621.0, c4 = 125.0 / 594.0, c6 = 512.0 / 1771.0;
  constexpr double d1 = c1 - 2825.0 / 27648.0, d3 = c3 - 18575.0 / 48384.0,
                   d4 = c4 - 13525.0 / 55296.0, d5 = -277.0 / 14336.0, d6 = c6 - 1.0 / 4.0;

  double k2 = rhs(w + h * (b21 * k1));
  double k3 = rhs(w + h * (b31 * k1 + b32 * k2));
  double k4 = rhs(w + h * (b41 * k1 + b42 * k2 + b43 * k3));
  double k5 = rhs(w + h * (b51 * k1 + b52 * k2 + b53 * k3 + b54 * k4));
  double k6 = rhs(w + h * (b61 * k1 + b62 * k2 + b63 * k3 + b64 * k4 + b65 * k5));
  *w5 = w + h * (c1 * k1 + c3 * k3 + c4 * k4 + c6 * k6);
  *err = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6);
}

}  // namespace detail

// Integrates dw/dt = rhs(w) over a span of given length, returning w(span).
template <class Rhs>
double integrate_scalar(Rhs&& rhs, double w0, double span, const OdeOptions& opt = {}) {
  if (!(span >= 0.0) || !std::isfinite(span)) {
    throw std::invalid_argument("integrate_scalar: span must be finite and nonnegative");
  }
  if (span == 0.0) return w0;

  double t = 0.0;
  double w = w0;
  double f0 = rhs(w);
  // modest first guess; the controller adapts quickly either way
  double h = span;
  double scale0 = opt.atol + opt.rtol * std::abs(w);
  if (std::abs(f0) * h > scale0) h = std::max(scale0 / std::abs(f0), span * 1e-12);

  long long steps = 0;
  while (t < span) {
    if (++steps > opt.max_steps) {
      throw PreconditionError("integrate_scalar: step budget exceeded");
    }
    h = std::min(h, span - t);
    double k1 = rhs(w);
    double w5, err;
    detail::cash_karp_step(rhs, w, h, k1, &w5, &err);
    if (!std::isfinite(w5)) {
      h *= 0.25;
      if (!(h > 0.0) || !std::isfinite(h)) {
        throw PreconditionError("integrate_scalar: step size underflow on nonfinite stage");
      }
      continue;
    }
    double scale = opt.atol + opt.rtol * std::max(std::abs(w), std::abs(w5));
    double ratio = std::abs(err) / scale;
    if (ratio <= 1.0) {
      t += h;
      w = w5;
      double grow = (ratio > 1e-10) ? 0.9 * std::pow(ratio, -0.2) : 5.0;
      h *= std::clamp(grow, 0.2, 5.0);
    } else {
      h *= std::clamp(0.9 * std::pow(ratio, -0.25), 0.1, 0.9);
    }
  }
  return w;
}

// Integrates through a sorted list of output times (first entry may be 0);
// returns w at each requested time. Times must be nondecreasing.
template <class Rhs>
std::vector<double> integrate_at(Rhs&& rhs, double w0, const std::vector<double>& times,
                                 const OdeOptions& opt = {}) {
  std::vector<double> out;
  out.reserve(times.size());
  double t_prev = 0.0;
  double w = w0;
  for (double t : times) {
    if (t < t_prev) throw std::invalid_argument("integrate_at: times must be nondecreasing");
    w = integrate_scalar(rhs, w, t - t_prev, opt);
    out.push_back(w);
    t_prev = t;
  }
  return out;
}

}  // namespace kinalign
