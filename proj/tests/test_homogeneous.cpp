#include <doctest.h>

#include <cmath>

#include "kinalign/solver.hpp"
#include "test_util.hpp"

using namespace kinalign;

TEST_CASE("homogeneous dynamics with gamma above one aligns on the majority") {
  auto run = solve_homogeneous({2.0, 1.0}, 2.0, 50.0);
  CHECK(run.front().first == 0.0);
  CHECK(run.back().first == 50.0);
  CHECK(run.back().second.f1 == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(run.back().second.f_minus1 == doctest::Approx(0.0).epsilon(1e-6));

  // minority start, same mechanism the other way
  auto run2 = solve_homogeneous({1.0, 4.0}, 3.5, 50.0);
  CHECK(run2.back().second.f1 == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(run2.back().second.f_minus1 == doctest::Approx(5.0).epsilon(1e-6));
}

TEST_CASE("homogeneous dynamics with gamma below one equalizes") {
  auto run = solve_homogeneous({2.0, 1.0}, 0.5, 50.0);
  CHECK(run.back().second.f1 == doctest::Approx(1.5).epsilon(1e-6));
  CHECK(run.back().second.f_minus1 == doctest::Approx(1.5).epsilon(1e-6));
}

TEST_CASE("homogeneous dynamics conserves the total and moves monotonically") {
  auto run = solve_homogeneous({2.0, 1.0}, 2.0, 10.0, 101);
  double prev_f1 = -1.0;
  for (const auto& [t, s] : run) {
    CHECK(s.f1 + s.f_minus1 == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(s.f1 >= prev_f1 - 1e-12);  // majority share only grows
    CHECK(s.f1 >= 0.0);
    CHECK(s.f_minus1 >= 0.0);
    prev_f1 = s.f1;
  }

  auto eq = solve_homogeneous({2.0, 1.0}, 0.5, 10.0, 101);
  double prev_gap = 2.0;
  for (const auto& [t, s] : eq) {
    double gap = std::abs(s.f1 - s.f_minus1);
    CHECK(gap <= prev_gap + 1e-12);
    prev_gap = gap;
  }
}

TEST_CASE("homogeneous equilibria are exact fixed points") {
  auto bal = solve_homogeneous({1.25, 1.25}, 2.0, 5.0, 11);
  for (const auto& [t, s] : bal) {
    CHECK(s.f1 == 1.25);
    CHECK(s.f_minus1 == 1.25);
  }

  auto one = solve_homogeneous({2.5, 0.0}, 2.0, 5.0, 11);
  for (const auto& [t, s] : one) {
    CHECK(s.f1 == 2.5);
    CHECK(s.f_minus1 == 0.0);
  }

  auto vac = solve_homogeneous({0.0, 0.0}, 2.0, 5.0, 11);
  for (const auto& [t, s] : vac) {
    CHECK(s.f1 == 0.0);
    CHECK(s.f_minus1 == 0.0);
  }
}

TEST_CASE("homogeneous short-time slope matches the collision rate at (2,1)") {
  auto run = solve_homogeneous({2.0, 1.0}, 2.0, 1e-5, 2);
  const auto& s = run.back().second;
  double d_rate = ((s.f1 - s.f_minus1) - 1.0) / 1e-5;
  CHECK(d_rate == doctest::Approx(0.8).epsilon(1e-4));
}

TEST_CASE("homogeneous sample grid is uniform and input is validated") {
  auto run = solve_homogeneous({1.0, 1.0}, 2.0, 4.0, 5);
  REQUIRE(run.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(run[i].first == doctest::Approx(i * 1.0).epsilon(1e-15));

  CHECK_THROWS_AS(solve_homogeneous({-1.0, 1.0}, 2.0, 1.0), PreconditionError);
  CHECK_THROWS_AS(solve_homogeneous({1.0, 1.0}, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(solve_homogeneous({1.0, 1.0}, 2.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(solve_homogeneous({1.0, 1.0}, 2.0, 1.0, 1), std::invalid_argument);
}
