#pragma once

#include "qhj/solvers/config.hpp"

#include <cmath>
#include <complex>
#include <memory>
#include <numbers>

namespace qhj::solvers {

// Closed-form reference states (1D). Each provides the state and its exact
// time derivative so residual checks never depend on finite differencing.
// Formula derivations live in docs/analytic-states.md.
class AnalyticState {
 public:
  virtual ~AnalyticState() = default;
  virtual std::complex<double> value(double x, double t) const = 0;
  virtual std::complex<double> time_derivative(double x, double t) const = 0;

  ComplexField sample(const Grid& g, double t) const {
    require_1d(g);
    ComplexField out(g.size());
    for (int j = 0; j < g.size(); ++j) out[j] = value(g.coord(0, j), t);
    return out;
  }
  ComplexField sample_dot(const Grid& g, double t) const {
    require_1d(g);
    ComplexField out(g.size());
    for (int j = 0; j < g.size(); ++j) out[j] = time_derivative(g.coord(0, j), t);
    return out;
  }

 private:
  static void require_1d(const Grid& g) {
    if (g.dim != 1) throw ConfigError("analytic states are one-dimensional");
  }
};

// Spreading Gaussian packet, lambda = 1 + i hbar t / (2 m sigma0^2):
//   psi = (2 pi sigma0^2)^(-1/4) lambda^(-1/2)
//         exp(-(x-xc)^2/(4 sigma0^2 lambda) + i(k0 (x-x0) - hbar k0^2 t / 2m))
// with xc = x0 + hbar k0 t / m; width sigma(t) = sigma0 |lambda|.
class FreeGaussian final : public AnalyticState {
 public:
  FreeGaussian(double sigma0, double x0, double k0, Constants c)
      : sigma0_(sigma0), x0_(x0), k0_(k0), c_(c) {
    if (!(sigma0 > 0)) throw ConfigError("free-gaussian sigma0 must be positive");
  }

  std::complex<double> value(double x, double t) const override {
    auto lam = lambda(t);
    double xc = center(t);
    std::complex<double> exponent =
        -(x - xc) * (x - xc) / (4 * sigma0_ * sigma0_ * lam) +
        std::complex<double>(0, k0_ * (x - x0_) - c_.hbar * k0_ * k0_ * t / (2 * c_.m));
    return std::pow(2 * std::numbers::pi * sigma0_ * sigma0_, -0.25) *
           std::exp(exponent) / std::sqrt(lam);
  }

  std::complex<double> time_derivative(double x, double t) const override {
    auto lam = lambda(t);
    std::complex<double> lam_dot(0, c_.hbar / (2 * c_.m * sigma0_ * sigma0_));
    double xc = center(t);
    double xc_dot = c_.hbar * k0_ / c_.m;
    std::complex<double> dlog =
        -lam_dot / (2.0 * lam) +
        (x - xc) * (x - xc) * lam_dot / (4 * sigma0_ * sigma0_ * lam * lam) +
        (x - xc) * xc_dot / (2 * sigma0_ * sigma0_ * lam) +
        std::complex<double>(0, -c_.hbar * k0_ * k0_ / (2 * c_.m));
    return dlog * value(x, t);
  }

  // Guidance-law velocity grad S / m in closed form (trajectory oracle).
  double velocity(double x, double t) const {
    double beta = c_.hbar * t / (2 * c_.m * sigma0_ * sigma0_);
    double xc = center(t);
    double beta_dot = c_.hbar / (2 * c_.m * sigma0_ * sigma0_);
    return (x - xc) * beta * beta_dot / (1 + beta * beta) + c_.hbar * k0_ / c_.m;
  }

  double width(double t) const { return sigma0_ * std::abs(lambda(t)); }
  double center(double t) const { return x0_ + c_.hbar * k0_ * t / c_.m; }

 private:
  std::complex<double> lambda(double t) const {
    return {1.0, c_.hbar * t / (2 * c_.m * sigma0_ * sigma0_)};
  }
  double sigma0_, x0_, k0_;
  Constants c_;
};

// Oscillator ground state: stationary amplitude, phase -omega t / 2.
class HarmonicGround final : public AnalyticState {
 public:
  HarmonicGround(double omega, Constants c) : omega_(omega), c_(c) {
    if (!(omega > 0)) throw ConfigError("harmonic-ground omega must be positive");
  }
  std::complex<double> value(double x, double t) const override {
    double a = c_.m * omega_ / c_.hbar;
    return std::pow(a / std::numbers::pi, 0.25) *
           std::exp(std::complex<double>(-a * x * x / 2, -omega_ * t / 2));
  }
  std::complex<double> time_derivative(double x, double t) const override {
    return std::complex<double>(0, -omega_ / 2) * value(x, t);
  }

 private:
  double omega_;
  Constants c_;
};

// Displaced ground state: a rigid Gaussian following the classical orbit
//   xc = x0 cos(omega t), pc = -m omega x0 sin(omega t),
//   psi = (m omega / pi hbar)^(1/4)
//         exp(-(m omega / 2 hbar)(x-xc)^2 + i(pc x - pc xc / 2)/hbar - i omega t/2).
class HarmonicCoherent final : public AnalyticState {
 public:
  HarmonicCoherent(double omega, double x0, Constants c)
      : omega_(omega), x0_(x0), c_(c) {
    if (!(omega > 0)) throw ConfigError("harmonic-coherent omega must be positive");
  }

  std::complex<double> value(double x, double t) const override {
    double a = c_.m * omega_ / c_.hbar;
    double xc = x0_ * std::cos(omega_ * t);
    double pc = -c_.m * omega_ * x0_ * std::sin(omega_ * t);
    std::complex<double> exponent(
        -a * (x - xc) * (x - xc) / 2,
        (pc * x - pc * xc / 2) / c_.hbar - omega_ * t / 2);
    return std::pow(a / std::numbers::pi, 0.25) * std::exp(exponent);
  }

  std::complex<double> time_derivative(double x, double t) const override {
    double a = c_.m * omega_ / c_.hbar;
    double xc = x0_ * std::cos(omega_ * t);
    double pc = -c_.m * omega_ * x0_ * std::sin(omega_ * t);
    double xc_dot = pc / c_.m;
    double pc_dot = -c_.m * omega_ * omega_ * xc;
    std::complex<double> dlog(
        a * (x - xc) * xc_dot,
        (pc_dot * x - (pc_dot * xc + pc * xc_dot) / 2) / c_.hbar - omega_ / 2);
    return dlog * value(x, t);
  }

 private:
  double omega_, x0_;
  Constants c_;
};

// Relativistic plane wave on the mass shell: E = sqrt(p^2 c^2 + m0^2 c^4).
class KgPlaneWave final : public AnalyticState {
 public:
  KgPlaneWave(double momentum, Constants c) : p_(momentum), c_(c) {}

  double energy() const {
    double c2 = c_.c_light * c_.c_light;
    return std::sqrt(p_ * p_ * c2 + c_.m0 * c_.m0 * c2 * c2);
  }
  std::complex<double> value(double x, double t) const override {
    return std::exp(std::complex<double>(0, (p_ * x - energy() * t) / c_.hbar));
  }
  std::complex<double> time_derivative(double x, double t) const override {
    return std::complex<double>(0, -energy() / c_.hbar) * value(x, t);
  }

 private:
  double p_;
  Constants c_;
};

inline std::unique_ptr<AnalyticState> make_analytic_state(const InitialStateSpec& spec,
                                                          const Constants& constants) {
  if (spec.kind == "free-gaussian")
    return std::make_unique<FreeGaussian>(spec.sigma0, spec.x0, spec.k0, constants);
  if (spec.kind == "harmonic-ground")
    return std::make_unique<HarmonicGround>(spec.omega, constants);
  if (spec.kind == "harmonic-coherent")
    return std::make_unique<HarmonicCoherent>(spec.omega, spec.x0, constants);
  if (spec.kind == "kg-plane-wave")
    return std::make_unique<KgPlaneWave>(spec.momentum, constants);
  throw ConfigError("unknown analytic state kind: " + spec.kind);
}

}  // namespace qhj::solvers
