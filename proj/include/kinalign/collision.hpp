#pragma once
// Alignment collision operator, its gain form, equilibria and the
// linearized/projected structure around them.

#include "kinalign/types.hpp"

namespace kinalign {

// Values of a two-orientation field at a single point.
struct ValuePair {
  double plus = 0.0;
  double minus = 0.0;

  double component(Orientation j) const { return j == Orientation::plus ? plus : minus; }
  bool operator==(const ValuePair&) const = default;
};

// Pointwise collision rate for one cell. Cells whose total density is at or
// below chi_floor are treated as vacuum (rate 0 in both components).
ValuePair collision_q_cell(double f_plus, double f_minus, double gamma, double chi_floor);

// Gain form: R[f](j) = f(j)^gamma * (f(+1)+f(-1)) / (f(+1)^gamma + f(-1)^gamma),
// so that Q = R - f wherever the collision is active.
ValuePair collision_r_cell(double f_plus, double f_minus, double gamma, double chi_floor);

// Fieldwise versions. The result has the shape of a KineticState but holds
// signed rates (collision_q) resp. nonnegative gains (collision_r).
KineticState collision_q(const KineticState& f, const ModelParams& params, const Grid& grid);
KineticState collision_r(const KineticState& f, const ModelParams& params, const Grid& grid);

// Local equilibrium carrying density rho: both components rho/2 for the
// diffusive kind, everything in orientation k for the aligned kind.
KineticState maxwellian(const EquilibriumKind& kind, const MacroField& rho, const Grid& grid);

// Derivative of the collision operator at the corresponding Maxwellian,
// applied to a pointwise perturbation. Density-independent by homogeneity.
ValuePair linearize_apply(const EquilibriumKind& kind, double gamma, const ValuePair& f);

enum class SubspaceSelector { hydrodynamic, kinetic };

// Spectral projection of a pointwise pair onto the conserved (hydrodynamic)
// or decaying (kinetic) eigenspace of the linearized collision operator.
ValuePair project(const EquilibriumKind& kind, const ValuePair& f, SubspaceSelector which);

}  // namespace kinalign
