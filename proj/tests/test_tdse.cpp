#include "qhj/solvers/tdse.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

using namespace qhj::fields;
using namespace qhj::solvers;

namespace {

ScenarioConfig free_config() {
  ScenarioConfig cfg;
  cfg.grid = Grid::line(512, 40.0);
  cfg.initial_state.kind = "free-gaussian";
  cfg.initial_state.sigma0 = 1.0;
  cfg.initial_state.k0 = 1.0;
  cfg.solver.kind = "tdse";
  cfg.solver.time_step = 1e-3;
  cfg.solver.steps = 500;
  cfg.solver.output_stride = 100;
  return cfg;
}

double max_diff(const ComplexField& a, const ComplexField& b) {
  double worst = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace

TEST_CASE("split-step propagation of a free packet matches the closed form") {
  auto cfg = free_config();
  auto rec = solve_tdse(cfg);
  FreeGaussian exact(1.0, 0.0, 1.0, cfg.constants);
  REQUIRE(rec.slices() == 6);
  for (int k = 0; k < rec.slices(); ++k) {
    INFO("slice " << k << " at t=" << rec.times[k]);
    CHECK(max_diff(rec.states[k], exact.sample(cfg.grid, rec.times[k])) < 1e-11);
  }
}

TEST_CASE("propagation conserves the norm and reports drift") {
  ScenarioConfig cfg;
  cfg.grid = Grid::line(256, 32.0);
  cfg.potential.kind = "harmonic";
  cfg.initial_state.kind = "harmonic-coherent";
  cfg.initial_state.x0 = 2.0;
  cfg.solver.time_step = 1e-3;
  cfg.solver.steps = 1000;
  auto rec = solve_tdse(cfg);
  CHECK(rec.method == "split-step-fourier-o2");
  CHECK(rec.state_dots.empty());
  CHECK(rec.info["max_norm_drift"].get<double>() < 1e-10);
  CHECK(rec.info["initial_norm"].get<double>() == Catch::Approx(1.0).epsilon(1e-8));
  CHECK(rec.info.contains("config"));
  CHECK(std::abs(norm_l2(rec.grid, rec.states.back()) - 1.0) < 1e-10);
  CHECK_NOTHROW(rec.check());
}

TEST_CASE("splitting error shrinks about fourfold when the step halves") {
  ScenarioConfig cfg;
  cfg.grid = Grid::line(256, 32.0);
  cfg.potential.kind = "harmonic";
  cfg.initial_state.kind = "harmonic-coherent";
  cfg.initial_state.x0 = 1.0;
  HarmonicCoherent exact(1.0, 1.0, cfg.constants);
  auto run = [&](double dt, int steps) {
    cfg.solver.time_step = dt;
    cfg.solver.steps = steps;
    cfg.solver.output_stride = steps;
    auto rec = solve_tdse(cfg);
    return max_diff(rec.states.back(), exact.sample(cfg.grid, rec.times.back()));
  };
  double coarse = run(2.5e-3, 200);
  double fine = run(1.25e-3, 400);
  INFO("coarse=" << coarse << " fine=" << fine);
  CHECK(coarse / fine > 3.0);
  CHECK(coarse / fine < 5.0);
}

TEST_CASE("output stride keeps the head and tail slices") {
  auto cfg = free_config();
  cfg.solver.steps = 10;
  cfg.solver.output_stride = 3;
  auto rec = solve_tdse(cfg);
  REQUIRE(rec.slices() == 5);
  CHECK(rec.times[1] == Catch::Approx(3e-3));
  CHECK(rec.times.back() == Catch::Approx(10e-3));

  cfg.solver.output_stride = 5;
  rec = solve_tdse(cfg);
  REQUIRE(rec.slices() == 3);
  CHECK(rec.times.back() == Catch::Approx(10e-3));
}

TEST_CASE("a tabulated initial state reproduces the named one") {
  auto cfg = free_config();
  cfg.solver.steps = 50;
  auto named = solve_tdse(cfg);

  auto table_cfg = cfg;
  table_cfg.initial_state = InitialStateSpec{};
  table_cfg.initial_state.kind = "table";
  table_cfg.initial_state.table =
      FreeGaussian(1.0, 0.0, 1.0, cfg.constants).sample(cfg.grid, 0.0);
  auto tabulated = solve_tdse(table_cfg);
  CHECK(max_diff(named.states.back(), tabulated.states.back()) == 0.0);
}

TEST_CASE("configuration mismatches are refused") {
  auto cfg = free_config();
  cfg.initial_state.kind = "kg-plane-wave";
  CHECK_THROWS_AS(solve_tdse(cfg), ConfigError);

  cfg = free_config();
  cfg.solver.kind = "kg";
  CHECK_THROWS_AS(solve_tdse(cfg), ConfigError);

  cfg = free_config();
  cfg.initial_state.kind = "table";
  cfg.initial_state.table = ComplexField(cfg.grid.size(), {0.0, 0.0});
  CHECK_THROWS_AS(solve_tdse(cfg), ConfigError);
}
