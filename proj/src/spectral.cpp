#include "kinalign/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kinalign {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void fft_inplace(std::vector<std::complex<double>>& a, bool inverse) {
  std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    double ang = 2.0 * std::numbers::pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
    std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        std::complex<double> u = a[i + k];
        std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

std::vector<std::complex<double>> dft_direct(const std::vector<std::complex<double>>& a,
                                             bool inverse) {
  std::size_t n = a.size();
  std::vector<std::complex<double>> out(n);
  double sgn = inverse ? 1.0 : -1.0;
  for (std::size_t m = 0; m < n; ++m) {
    std::complex<double> s(0.0, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      double ang = sgn * 2.0 * std::numbers::pi * static_cast<double>(m * k % n) /
                   static_cast<double>(n);
      s += a[k] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[m] = s;
  }
  return out;
}

std::vector<std::complex<double>> transform(std::vector<std::complex<double>> a, bool inverse) {
  if (is_pow2(a.size())) {
    fft_inplace(a, inverse);
    return a;
  }
  return dft_direct(a, inverse);
}

}  // namespace

std::vector<std::complex<double>> forward_modes(const std::vector<double>& v) {
  std::vector<std::complex<double>> a(v.begin(), v.end());
  return transform(std::move(a), false);
}

std::vector<double> inverse_modes(const std::vector<std::complex<double>>& modes) {
  std::vector<std::complex<double>> a = transform(modes, true);
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i].real() / static_cast<double>(a.size());
  return out;
}

HeatSolution heat_solve_at(const MacroField& rho0, double D, const std::vector<double>& times,
                           const Grid& grid, bool unstable_demo) {
  if (rho0.size() != static_cast<std::size_t>(grid.n_cells)) {
    throw std::invalid_argument("heat_solve: density size does not match grid");
  }
  if (D < 0.0 && !unstable_demo) {
    throw PreconditionError(
        "heat_solve: negative diffusion coefficient is ill-posed forward in time; "
        "pass the unstable-demo flag to run it anyway");
  }
  std::vector<std::complex<double>> modes = forward_modes(rho0.rho);
  int n = grid.n_cells;
  HeatSolution sol;
  sol.times = times;
  sol.fields.reserve(times.size());
  std::vector<std::complex<double>> scaled(modes.size());
  for (double t : times) {
    if (!(t >= 0.0)) throw std::invalid_argument("heat_solve: times must be nonnegative");
    for (int m = 0; m < n; ++m) {
      int k = (m <= n / 2) ? m : m - n;
      double omega = 2.0 * std::numbers::pi * k;
      scaled[m] = modes[m] * std::exp(-D * omega * omega * t);
    }
    MacroField field;
    field.rho = inverse_modes(scaled);
    sol.fields.push_back(std::move(field));
  }
  return sol;
}

HeatSolution heat_solve(const MacroField& rho0, double D, double t_end, const Grid& grid,
                        int n_samples, bool unstable_demo) {
  if (!(t_end >= 0.0) || n_samples < 2) {
    throw std::invalid_argument("heat_solve: need t_end >= 0 and n_samples >= 2");
  }
  std::vector<double> times(n_samples);
  for (int i = 0; i < n_samples; ++i) times[i] = t_end * i / (n_samples - 1);
  return heat_solve_at(rho0, D, times, grid, unstable_demo);
}

}  // namespace kinalign
