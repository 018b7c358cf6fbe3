#include "qhj/fields/spectral.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

using namespace qhj::fields;

namespace {

double max_err(const RealField& a, const RealField& b) {
  double worst = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace

TEST_CASE("spectral derivatives are exact on band-limited fields") {
  Grid g = Grid::line(64, 2 * M_PI, 0.0);
  RealField f(g.size()), d1(g.size()), d2(g.size());
  for (int i = 0; i < g.size(); ++i) {
    double x = g.coord(0, i);
    f[i] = std::sin(3 * x) + 0.5 * std::cos(5 * x);
    d1[i] = 3 * std::cos(3 * x) - 2.5 * std::sin(5 * x);
    d2[i] = -9 * std::sin(3 * x) - 12.5 * std::cos(5 * x);
  }
  CHECK(max_err(derivative(g, f, 0, 1, Scheme::spectral), d1) < 1e-12);
  CHECK(max_err(derivative(g, f, 0, 2, Scheme::spectral), d2) < 1e-11);
}

TEST_CASE("the odd-order Nyquist mode is projected out") {
  Grid g = Grid::line(16, 2 * M_PI, 0.0);
  RealField f(g.size());
  for (int i = 0; i < g.size(); ++i) f[i] = (i % 2 == 0) ? 1.0 : -1.0;
  // cos(8x) on 16 points: its first derivative has no faithful grid image
  auto d = derivative(g, f, 0, 1, Scheme::spectral);
  for (double v : d) CHECK(std::abs(v) < 1e-12);
  // the second derivative keeps the mode: d2 = -64 f
  auto d2 = derivative(g, f, 0, 2, Scheme::spectral);
  CHECK(max_err(d2, [&] {
          RealField e(g.size());
          for (int i = 0; i < g.size(); ++i) e[i] = -64.0 * f[i];
          return e;
        }()) < 1e-10);
}

TEST_CASE("central differences converge at second order") {
  auto residual = [](int n) {
    Grid g = Grid::line(n, 2 * M_PI, 0.0);
    RealField f(g.size()), d2(g.size());
    for (int i = 0; i < g.size(); ++i) {
      double x = g.coord(0, i);
      f[i] = std::sin(2 * x);
      d2[i] = -4 * std::sin(2 * x);
    }
    RealField got = derivative(g, f, 0, 2, Scheme::central);
    double worst = 0;
    for (int i = 0; i < g.size(); ++i) worst = std::max(worst, std::abs(got[i] - d2[i]));
    return worst;
  };
  double coarse = residual(64), fine = residual(128);
  double order = std::log2(coarse / fine);
  CHECK(order > 1.8);
  CHECK(order < 2.2);
}

TEST_CASE("2d derivatives act along the requested axis") {
  Grid g = Grid::plane(32, 64, 2 * M_PI, 4 * M_PI);
  RealField f(g.size()), dx(g.size()), dy(g.size());
  for (int ix = 0; ix < g.points[0]; ++ix)
    for (int iy = 0; iy < g.points[1]; ++iy) {
      double x = g.coord(0, ix), y = g.coord(1, iy);
      int n = g.index(ix, iy);
      f[n] = std::sin(x) * std::cos(y);
      dx[n] = std::cos(x) * std::cos(y);
      dy[n] = -std::sin(x) * std::sin(y);
    }
  CHECK(max_err(derivative(g, f, 0, 1, Scheme::spectral), dx) < 1e-12);
  CHECK(max_err(derivative(g, f, 1, 1, Scheme::spectral), dy) < 1e-12);

  auto lap = laplacian(g, f, Scheme::spectral);
  RealField expect(g.size());
  for (int i = 0; i < g.size(); ++i) expect[i] = -2.0 * f[i];
  CHECK(max_err(lap, expect) < 1e-11);
}

TEST_CASE("invalid axis and order are rejected") {
  Grid g = Grid::line(32, 1.0);
  RealField f(g.size(), 0.0);
  CHECK_THROWS_AS(derivative(g, f, 1, 1, Scheme::spectral), std::invalid_argument);
  CHECK_THROWS_AS(derivative(g, f, 0, 3, Scheme::spectral), std::invalid_argument);
  CHECK_THROWS_AS(derivative(g, f, 0, 0, Scheme::spectral), std::invalid_argument);
}

TEST_CASE("complex fields differentiate componentwise") {
  Grid g = Grid::line(64, 2 * M_PI, 0.0);
  ComplexField f(g.size());
  for (int i = 0; i < g.size(); ++i) {
    double x = g.coord(0, i);
    f[i] = std::complex<double>(std::cos(2 * x), std::sin(2 * x));
  }
  auto d = derivative(g, f, 0, 1, Scheme::spectral);
  double worst = 0;
  for (int i = 0; i < g.size(); ++i) {
    double x = g.coord(0, i);
    std::complex<double> expect(-2 * std::sin(2 * x), 2 * std::cos(2 * x));
    worst = std::max(worst, std::abs(d[i] - expect));
  }
  CHECK(worst < 1e-12);
}
