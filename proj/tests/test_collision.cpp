#include <doctest.h>

#include <cmath>
#include <random>

#include "kinalign/collision.hpp"
#include "kinalign/types.hpp"
#include "test_util.hpp"

using namespace kinalign;

TEST_CASE("collision rate at (2,1) with gamma 2 matches the hand-computed value") {
  // a = 4, b = 1, numerator = 1*4 - 2*1 = 2, denominator = 5.
  ValuePair q = collision_q_cell(2.0, 1.0, 2.0, 0.0);
  CHECK(q.plus == 0.4);
  CHECK(q.minus == -0.4);

  // Gain form at the same point: rho = 3, R(+1) = 4*3/5, R(-1) = 1*3/5.
  ValuePair r = collision_r_cell(2.0, 1.0, 2.0, 0.0);
  CHECK(r.plus == 2.4);
  CHECK(r.minus == 0.6);
}

TEST_CASE("gain form minus identity reproduces the collision rate") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> dist(0.01, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    double fp = dist(rng), fm = dist(rng);
    double gamma = (trial % 2 == 0) ? 2.0 : 0.5;
    ValuePair q = collision_q_cell(fp, fm, gamma, 0.0);
    ValuePair r = collision_r_cell(fp, fm, gamma, 0.0);
    CHECK(q.plus == doctest::Approx(r.plus - fp).epsilon(1e-12));
    CHECK(q.minus == doctest::Approx(r.minus - fm).epsilon(1e-12));
  }
}

TEST_CASE("collision rate sums to zero exactly and is degree-one homogeneous") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(1e-6, 100.0);
  for (int trial = 0; trial < 500; ++trial) {
    double fp = dist(rng), fm = dist(rng);
    double gamma = (trial % 3 == 0) ? 0.5 : (trial % 3 == 1) ? 2.0 : 3.5;
    ValuePair q = collision_q_cell(fp, fm, gamma, 0.0);
    CHECK(q.plus + q.minus == 0.0);  // the two components are exact negations

    double lambda = 3.0;
    ValuePair ql = collision_q_cell(lambda * fp, lambda * fm, gamma, 0.0);
    CHECK(ql.plus == doctest::Approx(lambda * q.plus).epsilon(1e-12));
  }

  // Frozen instance of homogeneity: Q at 3*(2,1) is 3*Q at (2,1).
  ValuePair q3 = collision_q_cell(6.0, 3.0, 2.0, 0.0);
  CHECK(q3.plus == doctest::Approx(1.2).epsilon(1e-15));
}

TEST_CASE("cells at or below the vacuum floor produce zero rates") {
  CHECK(collision_q_cell(0.0, 0.0, 2.0, 1e-14) == ValuePair{0.0, 0.0});
  CHECK(collision_q_cell(5e-15, 4e-15, 2.0, 1e-14) == ValuePair{0.0, 0.0});
  CHECK(collision_r_cell(5e-15, 4e-15, 2.0, 1e-14) == ValuePair{0.0, 0.0});
  // Just above the floor the rule is active again.
  ValuePair q = collision_q_cell(2e-14, 1e-14, 2.0, 1e-14);
  CHECK(q.plus != 0.0);
}

TEST_CASE("swapping the two orientations mirrors the rate bit for bit") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> dist(0.01, 50.0);
  for (int trial = 0; trial < 300; ++trial) {
    double fp = dist(rng), fm = dist(rng);
    double gamma = (trial % 2 == 0) ? 2.0 : 0.5;
    ValuePair q = collision_q_cell(fp, fm, gamma, 0.0);
    ValuePair qs = collision_q_cell(fm, fp, gamma, 0.0);
    CHECK(qs.plus == q.minus);
    CHECK(qs.minus == q.plus);
    ValuePair r = collision_r_cell(fp, fm, gamma, 0.0);
    ValuePair rs = collision_r_cell(fm, fp, gamma, 0.0);
    CHECK(rs.plus == r.minus);
    CHECK(rs.minus == r.plus);
  }
}

TEST_CASE("both equilibrium families are exact kernels of the collision rate") {
  Grid grid = Grid::uniform(16);
  MacroField rho(16);
  for (int i = 0; i < 16; ++i) rho.rho[static_cast<std::size_t>(i)] = 0.3 + 0.1 * i;
  ModelParams params;
  params.gamma = 2.0;

  for (auto kind : {EquilibriumKind::diffusive(), EquilibriumKind::aligned(Orientation::plus),
                    EquilibriumKind::aligned(Orientation::minus)}) {
    KineticState m = maxwellian(kind, rho, grid);
    KineticState q = collision_q(m, params, grid);
    CHECK(norm_sup(q) == 0.0);
  }

  params.gamma = 0.5;
  KineticState m = maxwellian(EquilibriumKind::diffusive(), rho, grid);
  CHECK(norm_sup(collision_q(m, params, grid)) == 0.0);
}

TEST_CASE("gain form fixes the equilibria") {
  // (0.75, 0.75): all intermediates and the true quotient are representable.
  ValuePair r = collision_r_cell(0.75, 0.75, 2.0, 0.0);
  CHECK(r.plus == 0.75);
  CHECK(r.minus == 0.75);
  // fully aligned cell
  ValuePair ra = collision_r_cell(2.5, 0.0, 2.0, 0.0);
  CHECK(ra.plus == 2.5);
  CHECK(ra.minus == 0.0);

  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dist(0.01, 10.0);
  for (int trial = 0; trial < 100; ++trial) {
    double c = dist(rng);
    ValuePair rr = collision_r_cell(c, c, 1.7, 0.0);
    CHECK(rr.plus == doctest::Approx(c).epsilon(1e-14));
    CHECK(rr.minus == doctest::Approx(c).epsilon(1e-14));
  }
}

TEST_CASE("linearization around the balanced state") {
  // gamma = 2: coefficient (1-gamma)/2 = -1/2, so L(3,1) = (1,-1).
  ValuePair l = linearize_apply(EquilibriumKind::diffusive(), 2.0, {3.0, 1.0});
  CHECK(l.plus == 1.0);
  CHECK(l.minus == -1.0);
  // gamma = 1/2: coefficient +1/4.
  ValuePair l2 = linearize_apply(EquilibriumKind::diffusive(), 0.5, {3.0, 1.0});
  CHECK(l2.plus == -0.5);
  CHECK(l2.minus == 0.5);

  // Eigenstructure: constants are in the kernel, the difference mode carries
  // eigenvalue gamma - 1 (unstable for gamma > 1, damped for gamma < 1).
  ValuePair kernel = linearize_apply(EquilibriumKind::diffusive(), 2.0, {4.0, 4.0});
  CHECK(kernel.plus == 0.0);
  CHECK(kernel.minus == 0.0);
  ValuePair mode = linearize_apply(EquilibriumKind::diffusive(), 2.0, {1.0, -1.0});
  CHECK(mode.plus == doctest::Approx(2.0 - 1.0));
  CHECK(mode.minus == doctest::Approx(-(2.0 - 1.0)));
  ValuePair mode_half = linearize_apply(EquilibriumKind::diffusive(), 0.5, {1.0, -1.0});
  CHECK(mode_half.plus == doctest::Approx(0.5 - 1.0));
}

TEST_CASE("linearization around the aligned states") {
  ValuePair l = linearize_apply(EquilibriumKind::aligned(Orientation::plus), 2.0, {3.0, 1.0});
  CHECK(l.plus == 1.0);
  CHECK(l.minus == -1.0);
  ValuePair lm = linearize_apply(EquilibriumKind::aligned(Orientation::minus), 2.0, {3.0, 1.0});
  CHECK(lm.plus == -3.0);
  CHECK(lm.minus == 3.0);

  // The minority mode decays at unit rate regardless of gamma.
  for (double gamma : {0.5, 2.0, 5.0}) {
    ValuePair mode = linearize_apply(EquilibriumKind::aligned(Orientation::plus), gamma, {-1.0, 1.0});
    CHECK(mode.plus == -(-1.0));
    CHECK(mode.minus == -(1.0));
  }

  CHECK_THROWS_AS(linearize_apply(EquilibriumKind::diffusive(), 1.0, {1.0, 0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(linearize_apply(EquilibriumKind::diffusive(), 0.0, {1.0, 0.0}),
                  std::invalid_argument);
}

TEST_CASE("projection splits (3,1) as expected for each equilibrium family") {
  ValuePair f{3.0, 1.0};

  ValuePair h = project(EquilibriumKind::diffusive(), f, SubspaceSelector::hydrodynamic);
  ValuePair k = project(EquilibriumKind::diffusive(), f, SubspaceSelector::kinetic);
  CHECK(h == ValuePair{2.0, 2.0});
  CHECK(k == ValuePair{1.0, -1.0});

  h = project(EquilibriumKind::aligned(Orientation::plus), f, SubspaceSelector::hydrodynamic);
  k = project(EquilibriumKind::aligned(Orientation::plus), f, SubspaceSelector::kinetic);
  CHECK(h == ValuePair{4.0, 0.0});
  CHECK(k == ValuePair{-1.0, 1.0});

  h = project(EquilibriumKind::aligned(Orientation::minus), f, SubspaceSelector::hydrodynamic);
  k = project(EquilibriumKind::aligned(Orientation::minus), f, SubspaceSelector::kinetic);
  CHECK(h == ValuePair{0.0, 4.0});
  CHECK(k == ValuePair{3.0, -3.0});
}

TEST_CASE("projections are complementary idempotents annihilated by the linearization") {
  std::mt19937 rng(303);
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  const EquilibriumKind kinds[] = {EquilibriumKind::diffusive(),
                                   EquilibriumKind::aligned(Orientation::plus),
                                   EquilibriumKind::aligned(Orientation::minus)};
  for (int trial = 0; trial < 200; ++trial) {
    ValuePair f{dist(rng), dist(rng)};
    for (const auto& kind : kinds) {
      ValuePair h = project(kind, f, SubspaceSelector::hydrodynamic);
      ValuePair k = project(kind, f, SubspaceSelector::kinetic);
      double scale = std::abs(f.plus) + std::abs(f.minus) + 1.0;

      // completeness: the two parts add back to f
      CHECK(std::abs(h.plus + k.plus - f.plus) <= 1e-12 * scale);
      CHECK(std::abs(h.minus + k.minus - f.minus) <= 1e-12 * scale);

      // idempotence holds exactly: each projector only reads its own output
      CHECK(project(kind, h, SubspaceSelector::hydrodynamic) == h);
      CHECK(project(kind, k, SubspaceSelector::kinetic) == k);
      // cross application vanishes
      ValuePair hk = project(kind, h, SubspaceSelector::kinetic);
      CHECK(std::abs(hk.plus) <= 1e-12 * scale);
      CHECK(std::abs(hk.minus) <= 1e-12 * scale);

      // the hydrodynamic part is in the kernel of the linearization
      ValuePair lh = linearize_apply(kind, 2.0, h);
      CHECK(lh.plus == 0.0);
      CHECK(lh.minus == 0.0);

      // and L acts on the kinetic part alone (power-of-two coefficients at
      // gamma = 2 make this exact)
      ValuePair lf = linearize_apply(kind, 2.0, f);
      ValuePair lk = linearize_apply(kind, 2.0, k);
      CHECK(lf.plus == lk.plus);
      CHECK(lf.minus == lk.minus);
    }
  }
}

TEST_CASE("fieldwise operators validate their input") {
  Grid grid = Grid::uniform(8);
  ModelParams params;

  KineticState f(8);
  for (auto& v : f.f_plus) v = 1.0;
  for (auto& v : f.f_minus) v = 0.5;

  KineticState wrong(4);
  CHECK_THROWS_AS(collision_q(wrong, params, grid), std::invalid_argument);

  KineticState neg = f;
  neg.f_minus[3] = -0.25;
  CHECK(testutil::throws_with<PreconditionError>([&] { collision_q(neg, params, grid); },
                                                 "cell 3"));

  KineticState bad = f;
  bad.f_plus[5] = std::nan("");
  CHECK(testutil::throws_with<PreconditionError>([&] { collision_r(bad, params, grid); },
                                                 "cell 5"));

  ModelParams badp;
  badp.gamma = 1.0;
  CHECK_THROWS_AS(collision_q(f, badp, grid), std::invalid_argument);
}

TEST_CASE("maxwellian distributes density per family and validates it") {
  Grid grid = Grid::uniform(4);
  MacroField rho(4);
  rho.rho = {1.0, 2.0, 3.0, 4.0};

  KineticState md = maxwellian(EquilibriumKind::diffusive(), rho, grid);
  CHECK(md.f_plus[1] == 1.0);
  CHECK(md.f_minus[1] == 1.0);

  KineticState mp = maxwellian(EquilibriumKind::aligned(Orientation::plus), rho, grid);
  CHECK(mp.f_plus[2] == 3.0);
  CHECK(mp.f_minus[2] == 0.0);

  KineticState mm = maxwellian(EquilibriumKind::aligned(Orientation::minus), rho, grid);
  CHECK(mm.f_plus[3] == 0.0);
  CHECK(mm.f_minus[3] == 4.0);

  MacroField bad(4);
  bad.rho = {1.0, -2.0, 3.0, 4.0};
  CHECK(testutil::throws_with<PreconditionError>(
      [&] { maxwellian(EquilibriumKind::diffusive(), bad, grid); }, "cell 1"));
  MacroField short_rho(3);
  CHECK_THROWS_AS(maxwellian(EquilibriumKind::diffusive(), short_rho, grid),
                  std::invalid_argument);
}

TEST_CASE("orientation helpers") {
  CHECK(orientation_from_int(1) == Orientation::plus);
  CHECK(orientation_from_int(-1) == Orientation::minus);
  CHECK_THROWS_AS(orientation_from_int(0), std::invalid_argument);
  CHECK(flip(Orientation::plus) == Orientation::minus);
  CHECK(sign(Orientation::minus) == -1);
  CHECK_THROWS_AS(EquilibriumKind::diffusive().direction(), std::logic_error);
}
