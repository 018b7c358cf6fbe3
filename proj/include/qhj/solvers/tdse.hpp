#pragma once

#include "qhj/fields/spectral.hpp"
#include "qhj/solvers/analytic.hpp"
#include "qhj/solvers/record.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <string>
#include <vector>

namespace qhj::solvers {

namespace detail {

inline void check_finite(const ComplexField& psi, int step) {
  for (const auto& v : psi)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw SolverError("non-finite state at step " + std::to_string(step));
}

// One full kinetic phase rotation exp(-i hbar k^2 dt / 2m), applied axis by
// axis in frequency space.
class KineticPhase {
 public:
  KineticPhase(const Grid& g, const Constants& c, double dt) : grid_(g) {
    for (int axis = 0; axis < g.dim; ++axis) {
      auto k = fields::detail::wave_numbers(g.points[axis], g.extent[axis]);
      phases_[axis].resize(k.size());
      for (std::size_t j = 0; j < k.size(); ++j)
        phases_[axis][j] =
            std::exp(std::complex<double>(0, -c.hbar * k[j] * k[j] * dt / (2 * c.m)));
    }
  }

  void apply(ComplexField& psi) const {
    thread_local Eigen::FFT<double> fft;
    for (int axis = 0; axis < grid_.dim; ++axis) {
      const int n = grid_.points[axis];
      std::vector<std::complex<double>> line(n), freq;
      fields::detail::for_each_line(grid_, axis, [&](int start, int stride) {
        for (int j = 0; j < n; ++j) line[j] = psi[start + j * stride];
        fft.fwd(freq, line);
        for (int j = 0; j < n; ++j) freq[j] *= phases_[axis][j];
        fft.inv(line, freq);
        for (int j = 0; j < n; ++j) psi[start + j * stride] = line[j];
      });
    }
  }

 private:
  Grid grid_;
  std::array<std::vector<std::complex<double>>, 2> phases_;
};

}  // namespace detail

inline ComplexField initial_wave_function(const ScenarioConfig& cfg) {
  if (cfg.initial_state.kind == "table") {
    fields::check_size(cfg.grid, cfg.initial_state.table.size(), "initial table");
    return cfg.initial_state.table;
  }
  return make_analytic_state(cfg.initial_state, cfg.constants)->sample(cfg.grid, 0.0);
}

// Strang-split propagation of i hbar psi_t = [-(hbar^2/2m) lap + V] psi:
// half potential phase, full kinetic phase in frequency space, half potential
// phase. Second order in dt, norm-conserving by construction.
inline EvolutionRecord solve_tdse(const ScenarioConfig& cfg) {
  if (cfg.solver.kind != "tdse") throw ConfigError("solver kind is not tdse");
  if (cfg.initial_state.kind == "kg-plane-wave")
    throw ConfigError("kg-plane-wave initial state requires the kg solver");
  const Grid& g = cfg.grid;
  const double dt = cfg.solver.time_step;

  auto v = potential_field(g, cfg.potential, cfg.constants);
  std::vector<std::complex<double>> half_phase(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    half_phase[i] = std::exp(std::complex<double>(0, -v[i] * dt / (2 * cfg.constants.hbar)));
  detail::KineticPhase kinetic(g, cfg.constants, dt);

  ComplexField psi = initial_wave_function(cfg);
  fields::check_size(g, psi.size(), "initial state");

  EvolutionRecord rec;
  rec.grid = g;
  rec.constants = cfg.constants;
  rec.method = "split-step-fourier-o2";
  rec.info["config"] = cfg.to_json();
  const double norm0 = fields::norm_l2(g, psi);
  if (!(norm0 > 0)) throw ConfigError("initial state has zero norm");

  auto store = [&](int step) {
    rec.times.push_back(step * dt);
    rec.states.push_back(psi);
  };
  store(0);
  double max_norm_drift = 0;
  for (int step = 1; step <= cfg.solver.steps; ++step) {
    for (std::size_t i = 0; i < psi.size(); ++i) psi[i] *= half_phase[i];
    kinetic.apply(psi);
    for (std::size_t i = 0; i < psi.size(); ++i) psi[i] *= half_phase[i];
    detail::check_finite(psi, step);
    if (step % cfg.solver.output_stride == 0 || step == cfg.solver.steps) {
      if (rec.times.back() != step * dt) store(step);
      max_norm_drift = std::max(max_norm_drift,
                                std::abs(fields::norm_l2(g, psi) - norm0));
    }
  }
  rec.info["initial_norm"] = norm0;
  rec.info["max_norm_drift"] = max_norm_drift;
  rec.check();
  return rec;
}

}  // namespace qhj::solvers
