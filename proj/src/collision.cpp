#include "kinalign/collision.hpp"

#include <cmath>
#include <string>

namespace kinalign {

ValuePair collision_q_cell(double f_plus, double f_minus, double gamma, double chi_floor) {
  if (f_plus + f_minus <= chi_floor) return {0.0, 0.0};
  double a = pow_gamma(f_plus, gamma);
  double b = pow_gamma(f_minus, gamma);
  double den = a + b;
  // numerator for +1; the -1 numerator is its exact negation
  double num = f_minus * a - f_plus * b;
  return {num / den, -num / den};
}

ValuePair collision_r_cell(double f_plus, double f_minus, double gamma, double chi_floor) {
  if (f_plus + f_minus <= chi_floor) return {0.0, 0.0};
  double a = pow_gamma(f_plus, gamma);
  double b = pow_gamma(f_minus, gamma);
  double den = a + b;
  double rho = f_plus + f_minus;
  return {a * rho / den, b * rho / den};
}

namespace {

template <ValuePair (*CellOp)(double, double, double, double)>
KineticState apply_cellwise(const KineticState& f, const ModelParams& params, const Grid& grid,
                            const char* where) {
  params.validate();
  check_matches_grid(f, grid, where);
  check_finite(f, where);
  check_nonnegative(f, where);
  KineticState out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    ValuePair q = CellOp(f.f_plus[i], f.f_minus[i], params.gamma, params.chi_floor);
    out.f_plus[i] = q.plus;
    out.f_minus[i] = q.minus;
  }
  return out;
}

}  // namespace

KineticState collision_q(const KineticState& f, const ModelParams& params, const Grid& grid) {
  return apply_cellwise<collision_q_cell>(f, params, grid, "collision_q");
}

KineticState collision_r(const KineticState& f, const ModelParams& params, const Grid& grid) {
  return apply_cellwise<collision_r_cell>(f, params, grid, "collision_r");
}

KineticState maxwellian(const EquilibriumKind& kind, const MacroField& rho, const Grid& grid) {
  if (rho.size() != static_cast<std::size_t>(grid.n_cells)) {
    throw std::invalid_argument("maxwellian: density size does not match grid");
  }
  KineticState out(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) {
    double r = rho.rho[i];
    if (!(r >= 0.0) || !std::isfinite(r)) {
      throw PreconditionError("maxwellian: invalid density at cell " + std::to_string(i));
    }
    if (kind.is_diffusive()) {
      out.f_plus[i] = 0.5 * r;
      out.f_minus[i] = 0.5 * r;
    } else if (kind.direction() == Orientation::plus) {
      out.f_plus[i] = r;
    } else {
      out.f_minus[i] = r;
    }
  }
  return out;
}

ValuePair linearize_apply(const EquilibriumKind& kind, double gamma, const ValuePair& f) {
  if (!(gamma > 0.0) || gamma == 1.0) {
    throw std::invalid_argument("linearize_apply: gamma must be positive and different from 1");
  }
  if (kind.is_diffusive()) {
    double c = 0.5 * (1.0 - gamma);
    return {c * (f.minus - f.plus), c * (f.plus - f.minus)};
  }
  // Aligned along k: the k-component gains what the -k component loses.
  double fm = f.component(flip(kind.direction()));
  if (kind.direction() == Orientation::plus) return {fm, -fm};
  return {-fm, fm};
}

ValuePair project(const EquilibriumKind& kind, const ValuePair& f, SubspaceSelector which) {
  if (kind.is_diffusive()) {
    double mean = 0.5 * (f.plus + f.minus);
    if (which == SubspaceSelector::hydrodynamic) return {mean, mean};
    double d = 0.5 * (f.plus - f.minus);
    return {d, -d};
  }
  double rho = f.plus + f.minus;
  double fm = f.component(flip(kind.direction()));
  if (kind.direction() == Orientation::plus) {
    if (which == SubspaceSelector::hydrodynamic) return {rho, 0.0};
    return {-fm, fm};
  }
  if (which == SubspaceSelector::hydrodynamic) return {0.0, rho};
  return {fm, -fm};
}

}  // namespace kinalign
