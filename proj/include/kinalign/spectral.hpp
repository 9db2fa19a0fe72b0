#pragma once
// Discrete Fourier helpers and the diagonal-in-frequency heat solver used as
// the macroscopic reference dynamics.

#include <complex>
#include <vector>

#include "kinalign/types.hpp"

namespace kinalign {

// Forward DFT of real samples (radix-2 FFT when the length is a power of
// two, direct evaluation otherwise). Convention: modes[m] = sum_i v[i] *
// exp(-2*pi*i*m*k/n), no normalization.
std::vector<std::complex<double>> forward_modes(const std::vector<double>& v);

// Inverse of forward_modes, returning the real part (input is expected to be
// conjugate-symmetric up to rounding).
std::vector<double> inverse_modes(const std::vector<std::complex<double>>& modes);

struct HeatSolution {
  std::vector<double> times;
  std::vector<MacroField> fields;
};

// Evolves d/dt rho = D d^2/dx^2 rho on the periodic grid by exact decay of
// each Fourier mode; each output time is computed independently, so there is
// no time-stepping error and the discrete mean is preserved exactly.
// D < 0 grows high frequencies without bound and is only allowed when the
// caller explicitly opts into the unstable demonstration.
HeatSolution heat_solve_at(const MacroField& rho0, double D, const std::vector<double>& times,
                           const Grid& grid, bool unstable_demo = false);
HeatSolution heat_solve(const MacroField& rho0, double D, double t_end, const Grid& grid,
                        int n_samples = 51, bool unstable_demo = false);

}  // namespace kinalign
