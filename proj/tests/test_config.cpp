#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "kinalign/config.hpp"
#include "kinalign/types.hpp"
#include "test_util.hpp"

using namespace kinalign;

namespace {

RunConfig sample_config() {
  RunConfig c;
  c.experiment = ExperimentName::aligned_hyperbolic;
  c.gamma = 2.0 / 3.0 + 2.0;  // not representable in few digits
  c.epsilons = {0.1, 0.05, 0.025};
  c.scaling = Scaling::hyperbolic;
  c.k = Orientation::minus;
  c.n_cells = 128;
  c.t_end = 2.0;
  c.sample_every = 7;
  c.chi_floor = 1e-9;
  c.out_dir = "runs/a";
  c.initial.plus.mean = 5.0;
  c.initial.plus.modes = {{1, 1.0, 0.0}, {3, 0.5, 1.25}};
  c.initial.minus.mean = 0.5;
  c.initial.minus.modes = {{1, 0.2, 0.5}};
  return c;
}

}  // namespace

TEST_CASE("config round-trips through the canonical emitter") {
  RunConfig c = sample_config();
  std::string text = emit_config(c);
  RunConfig back = parse_config(text);
  CHECK(back == c);
  // canonical form is a fixed point
  CHECK(emit_config(back) == text);
  CHECK(text.find("deterministic = true") != std::string::npos);

  RunConfig minimal = parse_config("experiment = simulate\n");
  CHECK(minimal == RunConfig{});
}

TEST_CASE("config tolerates comments, blank lines and loose spacing") {
  std::string text =
      "  experiment = simulate   # one kinetic run\n"
      "\n"
      "# gamma stays at its default\n"
      "t_end = 0.5\n"
      "[initial.plus]\n"
      "  mean = 2.0\n"
      "  mode = 2, 0.5, 0.25\n";
  RunConfig c = parse_config(text);
  CHECK(c.t_end == 0.5);
  CHECK(c.initial.plus.mean == 2.0);
  REQUIRE(c.initial.plus.modes.size() == 1);
  CHECK(c.initial.plus.modes[0].wavenumber == 2);
  CHECK(c.initial.plus.modes[0].amplitude == 0.5);
  CHECK(c.initial.plus.modes[0].phase == 0.25);
  CHECK(c.initial.minus.modes.empty());
}

TEST_CASE("config syntax errors carry the line number") {
  CHECK(testutil::throws_with<ConfigError>(
      [] { parse_config("experiment = simulate\nbogus = 3\n"); }, "line 2"));
  CHECK(testutil::throws_with<ConfigError>(
      [] { parse_config("experiment = simulate\nbogus = 3\n"); }, "unknown key 'bogus'"));
  CHECK(testutil::throws_with<ConfigError>(
      [] { parse_config("experiment = simulate\n[initial.plus]\nfoo = 1\n"); }, "line 3"));
  CHECK(testutil::throws_with<ConfigError>(
      [] { parse_config("experiment = simulate\nnonsense\n"); }, "expected 'key = value'"));
  CHECK(testutil::throws_with<ConfigError>(
      [] { parse_config("experiment = simulate\n[initial.plus\nmean = 1\n"); },
      "unterminated"));
  CHECK(testutil::throws_with<ConfigError>(
      [] { parse_config("experiment = simulate\n[other]\n"); }, "unknown section"));
  CHECK(testutil::throws_with<ConfigError>(
      [] { parse_config("experiment = simulate\n= 3\n"); }, "empty key"));
  CHECK(testutil::throws_with<ConfigError>(
      [] { parse_config("experiment = simulate\ngamma = abc\n"); }, "cannot parse"));
  CHECK(testutil::throws_with<ConfigError>(
      [] { parse_config("experiment = simulate\ngamma = 2.0x\n"); }, "trailing junk"));
  CHECK(testutil::throws_with<ConfigError>(
      [] { parse_config("experiment = warp\n"); }, "unknown experiment"));
  CHECK(testutil::throws_with<ConfigError>(
      [] { parse_config("experiment = simulate\nmode = 1, 0.5, 0\n"); }, "unknown key"));
  CHECK(testutil::throws_with<ConfigError>(
      [] { parse_config("gamma = 2.0\n"); }, "missing required key 'experiment'"));
}

TEST_CASE("config validation rules") {
  auto parse_line = [](const std::string& extra) {
    return parse_config("experiment = simulate\n" + extra + "\n");
  };

  CHECK(testutil::throws_with<ConfigError>([&] { parse_line("gamma = 1"); }, "excluded"));
  CHECK(testutil::throws_with<ConfigError>([&] { parse_line("gamma = 0"); }, "positive"));
  CHECK(testutil::throws_with<ConfigError>([&] { parse_line("gamma = -2"); }, "positive"));

  CHECK(testutil::throws_with<ConfigError>(
      [&] { parse_line("epsilon = 0.1\nepsilons = 0.1, 0.05"); }, "conflicts"));
  CHECK(testutil::throws_with<ConfigError>(
      [&] { parse_line("epsilons = 0.1, 0.05\nepsilon = 0.1"); }, "conflicts"));
  CHECK(testutil::throws_with<ConfigError>(
      [&] { parse_line("epsilons = 0.1, 0.1"); }, "strictly decreasing"));
  CHECK(testutil::throws_with<ConfigError>([&] { parse_line("epsilon = 0"); }, "positive"));
  CHECK(parse_line("epsilon = 0.25").epsilons == std::vector<double>{0.25});

  CHECK(testutil::throws_with<ConfigError>(
      [&] { parse_line("deterministic = false"); }, "only supported mode"));
  CHECK(testutil::throws_with<ConfigError>(
      [&] { parse_line("deterministic = banana"); }, "must be 'true'"));
  CHECK(parse_line("deterministic = true").deterministic);

  CHECK(testutil::throws_with<ConfigError>([&] { parse_line("k = 2"); }, "1 or -1"));
  CHECK(parse_line("k = -1").k == Orientation::minus);

  CHECK(testutil::throws_with<ConfigError>([&] { parse_line("n_cells = 1"); }, ">= 2"));
  CHECK(testutil::throws_with<ConfigError>([&] { parse_line("sample_every = -1"); }, ">= 0"));
  CHECK(testutil::throws_with<ConfigError>([&] { parse_line("chi_floor = 0.01"); }, "1e-3"));
  CHECK(testutil::throws_with<ConfigError>([&] { parse_line("t_end = 0"); }, "t_end"));

  CHECK(testutil::throws_with<ConfigError>(
      [&] { parse_line("[initial.plus]\nmean = 1\nmode = 1, 1.5, 0"); }, "risks negativity"));
  CHECK(testutil::throws_with<ConfigError>(
      [&] { parse_line("[initial.plus]\nmean = -1"); }, ">= 0"));
  // a mean exactly equal to the budget is allowed (the synthesis clamps)
  CHECK(parse_line("[initial.plus]\nmean = 1\nmode = 1, 1.0, 0").initial.plus.mean == 1.0);

  CHECK(testutil::throws_with<ConfigError>(
      [&] { parse_line("[initial.plus]\nmode = 1, 0.5"); }, "wavenumber, amplitude, phase"));
  CHECK(testutil::throws_with<ConfigError>(
      [&] { parse_line("[initial.plus]\nmean = 2\nmode = 0, 0.5, 0"); }, "positive integer"));
  // an infinite amplitude already blows the negativity budget; the finiteness
  // check catches what slips past it (nan compares false, phase is unbudgeted)
  CHECK(testutil::throws_with<ConfigError>(
      [&] { parse_line("[initial.plus]\nmean = 2\nmode = 1, inf, 0"); }, "risks negativity"));
  CHECK(testutil::throws_with<ConfigError>(
      [&] { parse_line("[initial.plus]\nmean = 2\nmode = 1, nan, 0"); }, "finite"));
  CHECK(testutil::throws_with<ConfigError>(
      [&] { parse_line("[initial.plus]\nmean = 2\nmode = 1, 0.5, inf"); }, "finite"));

  CHECK(testutil::throws_with<ConfigError>(
      [] {
        parse_config("experiment = aligned_hyperbolic\nscaling = parabolic\n");
      },
      "requires scaling = hyperbolic"));
  CHECK(testutil::throws_with<ConfigError>(
      [] { parse_config("experiment = diffusive_parabolic\n"); },
      "requires scaling = parabolic"));
  CHECK(testutil::throws_with<ConfigError>(
      [] {
        parse_config(
            "experiment = homogeneous\n[initial.plus]\nmean = 2\nmode = 1, 0.5, 0\n");
      },
      "no modes"));
}

TEST_CASE("config overrides apply before validation, means only inside sections") {
  std::string text =
      "experiment = simulate\n"
      "gamma = 1\n"  // invalid on its own
      "[initial.plus]\n"
      "mean = 2.0\n";

  RunConfig fixed = parse_config(text, {"gamma=0.5"});
  CHECK(fixed.gamma == 0.5);

  RunConfig bumped = parse_config(text, {"gamma=3", "initial.plus.mean=3.5",
                                         "initial.minus.mean=0.25"});
  CHECK(bumped.initial.plus.mean == 3.5);
  CHECK(bumped.initial.minus.mean == 0.25);

  CHECK(testutil::throws_with<ConfigError>(
      [&] { parse_config(text, {"initial.plus.amplitude=1"}); },
      "only initial.*.mean"));
  CHECK(testutil::throws_with<ConfigError>(
      [&] { parse_config(text, {"gamma"}); }, "key=value"));
  CHECK(testutil::throws_with<ConfigError>(
      [&] { parse_config(text, {"blah=3"}); }, "unknown key"));
  // the merged document is still validated
  CHECK_THROWS_AS(parse_config(text, {"gamma=2", "t_end=0"}), ConfigError);
}

TEST_CASE("initial-data synthesis samples cell centers") {
  Grid grid = Grid::uniform(4);
  InitialDataSpec spec;
  spec.plus.mean = 2.0;
  spec.plus.modes = {{1, 1.0, 0.0}};
  spec.minus.mean = 5.0;

  KineticState f = synthesize_initial(spec, grid);
  for (int i = 0; i < 4; ++i) {
    double x = (i + 0.5) / 4.0;
    CHECK(f.f_plus[i] == doctest::Approx(2.0 + std::cos(2.0 * M_PI * x)).epsilon(1e-15));
    CHECK(f.f_minus[i] == 5.0);
  }
  // centers, not left edges: the first cell sees cos(pi/4), not cos(0)
  CHECK(f.f_plus[0] < 3.0);

  // grazing the zero line stays nonnegative in every cell
  InitialDataSpec graze;
  graze.plus.mean = 1.0;
  graze.plus.modes = {{1, 1.0, 0.0}};
  graze.minus.mean = 1.0;
  Grid odd = Grid::uniform(5);
  KineticState g = synthesize_initial(graze, odd);
  for (int i = 0; i < 5; ++i) {
    CHECK(g.f_plus[i] >= 0.0);
    CHECK(g.f_minus[i] == 1.0);
  }

  InitialDataSpec bad;
  bad.plus.mean = 1.0;
  bad.plus.modes = {{1, 1.5, 0.0}};
  CHECK_THROWS_AS(synthesize_initial(bad, grid), ConfigError);
}

TEST_CASE("experiment names round-trip") {
  for (ExperimentName e :
       {ExperimentName::simulate, ExperimentName::homogeneous, ExperimentName::layer,
        ExperimentName::micro, ExperimentName::aligned_hyperbolic,
        ExperimentName::diffusive_parabolic}) {
    std::string doc = std::string("experiment = ") + experiment_name(e);
    if (e == ExperimentName::diffusive_parabolic) doc += "\nscaling = parabolic";
    RunConfig c = parse_config(doc + "\n");
    CHECK(c.experiment == e);
  }
}
