#pragma once
// Core value types for the two-orientation kinetic alignment model on the
// unit torus: particles move with speed +1 or -1 and flip orientation through
// a nonlinear alignment collision rule.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace kinalign {

// Violation of a numerical precondition (domain condition, CFL-type check,
// step budget). The CLI maps this to its own exit code, distinct from
// configuration errors.
class PreconditionError : public std::runtime_error {
 public:
  explicit PreconditionError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class Orientation : int { minus = -1, plus = +1 };

constexpr Orientation flip(Orientation j) {
  return j == Orientation::plus ? Orientation::minus : Orientation::plus;
}
constexpr int sign(Orientation j) { return static_cast<int>(j); }

Orientation orientation_from_int(int k);

enum class Scaling { hyperbolic, parabolic };

// Cell-centered periodic grid on [0,1): x_i = (i + 1/2) * dx.
struct Grid {
  int n_cells = 0;
  double dx = 0.0;

  static Grid uniform(int n_cells);

  int wrap(long long i) const {
    long long n = n_cells;
    long long r = i % n;
    return static_cast<int>(r < 0 ? r + n : r);
  }
  double center(int i) const { return (i + 0.5) * dx; }

  bool operator==(const Grid&) const = default;
};

// Pair of cell-averaged occupation numbers, one per orientation.
// Plain data on purpose: collision rates reuse the same shape and may be
// negative, so nonnegativity is checked by the operations that need it.
struct KineticState {
  std::vector<double> f_plus;
  std::vector<double> f_minus;

  KineticState() = default;
  explicit KineticState(std::size_t n) : f_plus(n, 0.0), f_minus(n, 0.0) {}

  std::size_t size() const { return f_plus.size(); }

  std::vector<double>& component(Orientation j) {
    return j == Orientation::plus ? f_plus : f_minus;
  }
  const std::vector<double>& component(Orientation j) const {
    return j == Orientation::plus ? f_plus : f_minus;
  }
};

// Scalar density sampled on the same grid.
struct MacroField {
  std::vector<double> rho;

  MacroField() = default;
  explicit MacroField(std::size_t n, double value = 0.0) : rho(n, value) {}

  std::size_t size() const { return rho.size(); }
};

struct ModelParams {
  double gamma = 2.0;
  double epsilon = 1.0;
  Scaling scaling = Scaling::hyperbolic;
  // Cells whose total density does not exceed this floor are treated as
  // vacuum: the collision term is switched off there.
  double chi_floor = 1e-14;

  void validate() const;
};

// Which equilibrium family a linearization or projection refers to:
// both orientations equal, or everything aligned along one orientation.
class EquilibriumKind {
 public:
  static EquilibriumKind diffusive() { return EquilibriumKind(true, Orientation::plus); }
  static EquilibriumKind aligned(Orientation k) { return EquilibriumKind(false, k); }

  bool is_diffusive() const { return diffusive_; }
  Orientation direction() const;

  bool operator==(const EquilibriumKind&) const = default;

 private:
  EquilibriumKind(bool d, Orientation k) : diffusive_(d), k_(k) {}
  bool diffusive_;
  Orientation k_;
};

// Total mass sum_j sum_i f(j, x_i) * dx.
double mass(const KineticState& f, const Grid& grid);

// sum_j sup_x |f(j, x)|.
double norm_sup(const KineticState& f);
// sum_j sum_i |f(j, x_i)| * dx.
double norm_l1(const KineticState& f, const Grid& grid);

double min_value(const KineticState& f);
double max_value(const KineticState& f);

void check_matches_grid(const KineticState& f, const Grid& grid, const char* where);
// Throws PreconditionError naming the first offending cell.
void check_finite(const KineticState& f, const char* where);
void check_nonnegative(const KineticState& f, const char* where);

// x^gamma for x >= 0, with the cheap special cases spelled out.
inline double pow_gamma(double x, double gamma) {
  if (gamma == 2.0) return x * x;
  if (gamma == 0.5) return std::sqrt(x);
  return std::pow(x, gamma);
}

}  // namespace kinalign
