#pragma once
// Monotone lower/upper solution scheme for the unscaled kinetic system
// (epsilon = 1, hyperbolic). Successive substitution along characteristics
// produces an increasing sequence of subsolutions and a decreasing sequence
// of supersolutions with a common limit; the pair brackets the solution.

#include <vector>

#include "kinalign/solver.hpp"
#include "kinalign/types.hpp"

namespace kinalign {

struct MonotoneBracket {
  Trajectory lower;   // last subsolution iterate, sampled every step
  Trajectory upper;   // last supersolution iterate
  // The construction's starting envelope: pure exponential decay from the
  // datum below, free linear growth (collision gain without loss) above.
  Trajectory seed_lower;
  Trajectory seed_upper;
  int iterations = 0;
  double gap = 0.0;   // max over sample times of the L1 distance upper-lower
  bool converged = false;
  std::vector<double> gap_history;
  // worst pointwise breach of the expected ordering
  // (lower nondecreasing, upper nonincreasing, lower <= upper) seen across
  // all iterates; exact arithmetic would give 0
  double max_ordering_violation = 0.0;
  double mu = 0.0;    // min over cells and components of the datum
};

// Requires strictly positive initial data (min reported as mu). Iterates
// until gap <= tol or max_iter refinement rounds are done.
MonotoneBracket monotone_solve(const KineticState& f0, double gamma, const Grid& grid,
                               double t_end, double tol, int max_iter);

}  // namespace kinalign
