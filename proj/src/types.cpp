#include "kinalign/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kinalign {

Orientation orientation_from_int(int k) {
  if (k == 1) return Orientation::plus;
  if (k == -1) return Orientation::minus;
  throw std::invalid_argument("orientation must be +1 or -1, got " + std::to_string(k));
}

Grid Grid::uniform(int n_cells) {
  if (n_cells < 1) {
    throw std::invalid_argument("grid needs at least one cell, got " + std::to_string(n_cells));
  }
  Grid g;
  g.n_cells = n_cells;
  g.dx = 1.0 / n_cells;
  return g;
}

void ModelParams::validate() const {
  if (!(gamma > 0.0) || gamma == 1.0) {
    throw std::invalid_argument("gamma must be positive and different from 1");
  }
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("epsilon must be positive");
  }
  if (!(chi_floor >= 0.0)) {
    throw std::invalid_argument("chi_floor must be nonnegative");
  }
}

Orientation EquilibriumKind::direction() const {
  if (diffusive_) {
    throw std::logic_error("diffusive equilibrium has no preferred orientation");
  }
  return k_;
}

double mass(const KineticState& f, const Grid& grid) {
  check_matches_grid(f, grid, "mass");
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f.f_plus[i] + f.f_minus[i];
  return s * grid.dx;
}

double norm_sup(const KineticState& f) {
  double sp = 0.0, sm = 0.0;
  for (double v : f.f_plus) sp = std::max(sp, std::abs(v));
  for (double v : f.f_minus) sm = std::max(sm, std::abs(v));
  return sp + sm;
}

double norm_l1(const KineticState& f, const Grid& grid) {
  check_matches_grid(f, grid, "norm_l1");
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    s += std::abs(f.f_plus[i]) + std::abs(f.f_minus[i]);
  }
  return s * grid.dx;
}

double min_value(const KineticState& f) {
  double m = std::numeric_limits<double>::infinity();
  for (double v : f.f_plus) m = std::min(m, v);
  for (double v : f.f_minus) m = std::min(m, v);
  return m;
}

double max_value(const KineticState& f) {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : f.f_plus) m = std::max(m, v);
  for (double v : f.f_minus) m = std::max(m, v);
  return m;
}

void check_matches_grid(const KineticState& f, const Grid& grid, const char* where) {
  if (f.f_plus.size() != static_cast<std::size_t>(grid.n_cells) ||
      f.f_minus.size() != static_cast<std::size_t>(grid.n_cells)) {
    throw std::invalid_argument(std::string(where) + ": state size does not match grid");
  }
}

void check_finite(const KineticState& f, const char* where) {
  for (std::size_t i = 0; i < f.f_plus.size(); ++i) {
    if (!std::isfinite(f.f_plus[i])) {
      throw PreconditionError(std::string(where) + ": nonfinite value in component +1 at cell " +
                              std::to_string(i));
    }
  }
  for (std::size_t i = 0; i < f.f_minus.size(); ++i) {
    if (!std::isfinite(f.f_minus[i])) {
      throw PreconditionError(std::string(where) + ": nonfinite value in component -1 at cell " +
                              std::to_string(i));
    }
  }
}

void check_nonnegative(const KineticState& f, const char* where) {
  for (std::size_t i = 0; i < f.f_plus.size(); ++i) {
    if (!(f.f_plus[i] >= 0.0)) {
      throw PreconditionError(std::string(where) + ": negative value in component +1 at cell " +
                              std::to_string(i));
    }
  }
  for (std::size_t i = 0; i < f.f_minus.size(); ++i) {
    if (!(f.f_minus[i] >= 0.0)) {
      throw PreconditionError(std::string(where) + ": negative value in component -1 at cell " +
                              std::to_string(i));
    }
  }
}

}  // namespace kinalign
