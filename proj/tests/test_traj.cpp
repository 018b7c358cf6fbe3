#include "qhj/solvers/record.hpp"
#include "qhj/traj/trajectories.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

using namespace qhj::fields;
using namespace qhj::solvers;
using namespace qhj::traj;

namespace {

// unit-amplitude record with velocity (1 + t)(4 + cos x): linear in time,
// so only the integrator step limits accuracy
EvolutionRecord ramp_record() {
  Grid g = Grid::line(2048, 2 * std::numbers::pi, 0.0);
  EvolutionRecord rec;
  rec.grid = g;
  rec.method = "analytic";
  for (double t : {0.0, 1.0}) {
    rec.times.push_back(t);
    ComplexField psi(g.size());
    for (int i = 0; i < g.size(); ++i) {
      double x = g.coord(0, i);
      psi[i] = std::exp(std::complex<double>(0, (1 + t) * (4 * x + std::sin(x))));
    }
    rec.states.push_back(std::move(psi));
  }
  return rec;
}

}  // namespace

TEST_CASE("paths through a stationary state stay put") {
  Grid g = Grid::line(256, 32.0);
  Constants c;
  HarmonicGround state(1.0, c);
  auto rec = analytic_record(g, c, state, 0.0, 1.0, 11);
  auto set = integrate_trajectories(rec, {-1.0, 0.3, 1.2}, {});
  for (std::size_t s = 0; s < set.seeds.size(); ++s)
    for (std::size_t k = 0; k < set.times.size(); ++k)
      CHECK(std::abs(set.positions[s][k] - set.seeds[s]) < 1e-10);
}

TEST_CASE("a plane-wave record yields straight lines with winding bookkeeping") {
  Grid g = Grid::line(256, 8 * std::numbers::pi, 0.0);
  EvolutionRecord rec;
  rec.grid = g;
  rec.method = "analytic";
  const double k0 = 0.5;
  for (int k = 0; k <= 8; ++k) {
    double t = 0.25 * k;
    rec.times.push_back(t);
    ComplexField psi(g.size());
    for (int i = 0; i < g.size(); ++i)
      psi[i] = std::exp(std::complex<double>(0, k0 * g.coord(0, i)));
    rec.states.push_back(std::move(psi));
  }

  const double l = g.extent[0];
  std::vector<double> seeds{1.0, l - 0.5};
  auto set = integrate_trajectories(rec, seeds, {});
  // velocity hbar k0 / m = 0.5, horizon 2.0: displacement 1.0
  CHECK(set.unwrapped(0, 8, l) == Catch::Approx(2.0).margin(1e-10));
  CHECK(set.unwrapped(1, 8, l) == Catch::Approx(l + 0.5).margin(1e-10));
  CHECK(set.windings[1].back() == 1);
  CHECK(set.positions[1].back() == Catch::Approx(0.5).margin(1e-10));
}

TEST_CASE("spreading-packet path endpoint approaches the closed form") {
  Grid g = Grid::line(512, 40.0);
  Constants c;
  FreeGaussian state(1.0, 0.0, 0.0, c);
  auto rec = analytic_record(g, c, state, 0.0, 1.0, 101);
  auto set = integrate_trajectories(rec, {1.0}, {});
  // x(t) = x0 sqrt(1 + (hbar t / 2 m sigma0^2)^2)
  double expected = std::sqrt(1.25);
  CHECK(set.unwrapped(0, 100, g.extent[0]) == Catch::Approx(expected).margin(1e-5));
}

TEST_CASE("step halving gains about four orders in the integrator step") {
  auto rec = ramp_record();
  auto endpoint = [&](double dt) {
    TrajectoryOptions opts;
    opts.dt = dt;
    auto set = integrate_trajectories(rec, {0.7}, opts);
    return set.unwrapped(0, 1, rec.grid.extent[0]);
  };
  double p1 = endpoint(1.0 / 8);
  double p2 = endpoint(1.0 / 16);
  double p3 = endpoint(1.0 / 32);
  double order = std::log2(std::abs(p1 - p2) / std::abs(p2 - p3));
  INFO("p1=" << p1 << " p2=" << p2 << " p3=" << p3 << " order=" << order);
  CHECK(order > 3.5);
  CHECK(order < 4.6);
}

TEST_CASE("one-dimensional paths never cross") {
  Grid g = Grid::line(256, 40.0);
  Constants c;
  FreeGaussian state(1.0, 0.0, 1.0, c);
  auto rec = analytic_record(g, c, state, 0.0, 1.0, 21);
  std::vector<double> seeds(50);
  for (int i = 0; i < 50; ++i) seeds[i] = -3.0 + 6.0 * i / 49;
  auto set = integrate_trajectories(rec, seeds, {});
  for (std::size_t k = 0; k < set.times.size(); ++k)
    for (std::size_t s = 1; s < seeds.size(); ++s)
      CHECK(set.unwrapped(s, k, g.extent[0]) >
            set.unwrapped(s - 1, k, g.extent[0]));
}

TEST_CASE("masked seeds are refused by the stated guard") {
  Grid g = Grid::line(256, 40.0);
  Constants c;
  FreeGaussian state(1.0, 0.0, 0.0, c);
  auto rec = analytic_record(g, c, state, 0.0, 0.5, 3);
  CHECK_THROWS_AS(integrate_trajectories(rec, {18.0}, {}), std::domain_error);
  CHECK_THROWS_WITH(integrate_trajectories(rec, {18.0}, {}),
                    Catch::Matchers::ContainsSubstring("masked amplitude region"));
}

TEST_CASE("stratified seeds split a uniform density evenly") {
  Grid g = Grid::line(64, 8.0, 0.0);
  RealField density(64, 1.0);
  auto seeds = stratified_seeds(g, density, 4);
  REQUIRE(seeds.size() == 4);
  for (int i = 0; i < 4; ++i)
    CHECK(seeds[i] == Catch::Approx(1.0 + 2.0 * i).margin(1e-9));
}

TEST_CASE("random seeds are reproducible per rng seed") {
  Grid g = Grid::line(64, 8.0, 0.0);
  RealField density(64, 1.0);
  auto a = random_seeds(g, density, 16, 7);
  auto b = random_seeds(g, density, 16, 7);
  auto c = random_seeds(g, density, 16, 8);
  CHECK(a == b);
  CHECK(a != c);
}

TEST_CASE("quantile seeding validates the density") {
  Grid g = Grid::line(64, 8.0, 0.0);
  RealField negative(64, 1.0);
  negative[3] = -0.5;
  CHECK_THROWS_AS(quantile_positions(g, negative, {0.5}), std::invalid_argument);
  RealField zero(64, 0.0);
  CHECK_THROWS_AS(quantile_positions(g, zero, {0.5}), std::invalid_argument);
}

TEST_CASE("the distribution distance vanishes for quantile samples") {
  Grid g = Grid::line(256, 20.0);
  RealField density(256);
  for (int i = 0; i < 256; ++i) {
    double x = g.coord(0, i);
    density[i] = std::exp(-x * x / 2);
  }
  auto seeds = stratified_seeds(g, density, 400);
  CHECK(ks_statistic(seeds, g, density) < 0.01);

  // a sample drawn from a shifted density scores poorly
  RealField shifted(256);
  for (int i = 0; i < 256; ++i) {
    double x = g.coord(0, i) - 3.0;
    shifted[i] = std::exp(-x * x / 2);
  }
  CHECK(ks_statistic(seeds, g, shifted) > 0.5);
}
