#pragma once

#include "qhj/fields/spectral.hpp"
#include "qhj/solvers/record.hpp"
#include "qhj/support/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace qhj::traj {

using fields::Grid;
using fields::RealField;
using solvers::EvolutionRecord;

struct TrajectoryOptions {
  double dt = 0;           // integrator step; 0 means the record slice spacing
  double mask_eps = 1e-6;  // seeds must start where R >= mask_eps * max R
};

// Paths sampled at the record's time stamps. Positions are wrapped into the
// periodic domain; winding counts recover the unwrapped coordinate.
struct TrajectorySet {
  std::vector<double> times;
  std::vector<double> seeds;
  std::vector<std::vector<double>> positions;  // [seed][stamp], wrapped
  std::vector<std::vector<int>> windings;      // [seed][stamp]
  double dt = 0;
  int interpolation_order = 3;

  double unwrapped(int seed, int stamp, double extent) const {
    return positions[seed][stamp] + windings[seed][stamp] * extent;
  }
};

namespace detail {

// Periodic 4-point Lagrange interpolation on grid values.
inline double cubic(const RealField& f, const Grid& g, double x) {
  const int n = g.points[0];
  const double u = (x - g.origin[0]) / g.step(0);
  double base = std::floor(u);
  double s = u - base;
  int j = static_cast<int>(base) % n;
  if (j < 0) j += n;
  auto at = [&](int off) { return f[(j + off + 2 * n) % n]; };
  double w_m1 = -s * (s - 1) * (s - 2) / 6;
  double w_0 = (s + 1) * (s - 1) * (s - 2) / 2;
  double w_1 = -(s + 1) * s * (s - 2) / 2;
  double w_2 = (s + 1) * s * (s - 1) / 6;
  return w_m1 * at(-1) + w_0 * at(0) + w_1 * at(1) + w_2 * at(2);
}

// Guidance-law velocity grad S / m per stored slice, from psi itself
// (identical to the gradient of the unwrapped phase wherever the amplitude
// clears the mask; zeroed below it, where integration refuses to start).
inline std::vector<RealField> slice_velocities(const EvolutionRecord& rec,
                                               double mask_eps) {
  std::vector<RealField> v(rec.slices());
  for (int k = 0; k < rec.slices(); ++k) {
    const auto& psi = rec.states[k];
    auto d = fields::derivative(rec.grid, psi, 0, 1, fields::Scheme::spectral);
    RealField r(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) r[i] = std::abs(psi[i]);
    auto mask = fields::amplitude_mask(r, mask_eps);
    v[k].resize(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) {
      double r2 = std::norm(psi[i]);
      v[k][i] = mask[i]
                    ? rec.constants.hbar * std::imag(std::conj(psi[i]) * d[i]) /
                          (rec.constants.m * r2)
                    : 0.0;
    }
  }
  return v;
}

}  // namespace detail

inline TrajectorySet integrate_trajectories(const EvolutionRecord& rec,
                                            const std::vector<double>& seeds,
                                            TrajectoryOptions opts = {}) {
  rec.check();
  if (rec.grid.dim != 1)
    throw std::invalid_argument("trajectory integration is one-dimensional");
  if (rec.slices() < 2) throw std::invalid_argument("record needs at least two slices");
  const Grid& g = rec.grid;
  const double extent = g.extent[0];

  auto vel = detail::slice_velocities(rec, opts.mask_eps);

  // refuse seeds that start below the amplitude mask
  {
    RealField r0(rec.states[0].size());
    for (std::size_t i = 0; i < r0.size(); ++i) r0[i] = std::abs(rec.states[0][i]);
    double cutoff = opts.mask_eps * fields::max_abs(r0);
    for (double s : seeds)
      if (detail::cubic(r0, g, s) < cutoff)
        throw std::domain_error("trajectory seed at x=" + std::to_string(s) +
                                " lies in the masked amplitude region");
  }

  TrajectorySet set;
  set.times = rec.times;
  set.seeds = seeds;
  set.dt = opts.dt;
  set.positions.assign(seeds.size(), std::vector<double>(rec.slices()));
  set.windings.assign(seeds.size(), std::vector<int>(rec.slices()));

  auto velocity_at = [&](double x, double t) {
    // linear in time across the bracketing slices, cubic in space
    int hi = static_cast<int>(std::upper_bound(rec.times.begin(), rec.times.end(), t) -
                              rec.times.begin());
    if (hi <= 0) hi = 1;
    if (hi >= rec.slices()) hi = rec.slices() - 1;
    int lo = hi - 1;
    double span = rec.times[hi] - rec.times[lo];
    double w = (t - rec.times[lo]) / span;
    return (1 - w) * detail::cubic(vel[lo], g, x) + w * detail::cubic(vel[hi], g, x);
  };

  qhj::parallel_for(seeds.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t s = begin; s < end; ++s) {
      double x = seeds[s];
      auto record_sample = [&](int stamp) {
        double wind = std::floor((x - g.origin[0]) / extent);
        set.windings[s][stamp] = static_cast<int>(wind);
        set.positions[s][stamp] = x - wind * extent;
      };
      record_sample(0);
      for (int k = 0; k + 1 < rec.slices(); ++k) {
        double span = rec.times[k + 1] - rec.times[k];
        double step = opts.dt > 0 ? opts.dt : span;
        int substeps = std::max(1, static_cast<int>(std::ceil(span / step - 1e-12)));
        double tau = span / substeps;
        double t = rec.times[k];
        for (int i = 0; i < substeps; ++i) {
          double k1 = velocity_at(x, t);
          double k2 = velocity_at(x + tau / 2 * k1, t + tau / 2);
          double k3 = velocity_at(x + tau / 2 * k2, t + tau / 2);
          double k4 = velocity_at(x + tau * k3, t + tau);
          x += tau / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
          t += tau;
        }
        record_sample(k + 1);
      }
    }
  });
  return set;
}

// Deterministic quantile seeds of the density: the (i + 1/2)/count points of
// the inverse CDF built by trapezoid accumulation over one period.
inline std::vector<double> quantile_positions(const Grid& g, const RealField& density,
                                              const std::vector<double>& u) {
  fields::check_size(g, density.size(), "quantile_positions");
  const int n = g.points[0];
  const double h = g.step(0);
  std::vector<double> cdf(n + 1, 0.0);
  for (int j = 0; j < n; ++j) {
    double a = density[j], b = density[(j + 1) % n];
    if (a < 0 || b < 0) throw std::invalid_argument("density must be nonnegative");
    cdf[j + 1] = cdf[j] + h * (a + b) / 2;
  }
  double total = cdf[n];
  if (!(total > 0)) throw std::invalid_argument("density integrates to zero");
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    double target = u[i] * total;
    int hi = static_cast<int>(std::upper_bound(cdf.begin(), cdf.end(), target) -
                              cdf.begin());
    hi = std::clamp(hi, 1, n);
    double seg = cdf[hi] - cdf[hi - 1];
    double frac = seg > 0 ? (target - cdf[hi - 1]) / seg : 0.0;
    out[i] = g.coord(0, hi - 1) + frac * h;
  }
  return out;
}

inline std::vector<double> stratified_seeds(const Grid& g, const RealField& density,
                                            int count) {
  std::vector<double> u(count);
  for (int i = 0; i < count; ++i) u[i] = (i + 0.5) / count;
  return quantile_positions(g, density, u);
}

inline std::vector<double> random_seeds(const Grid& g, const RealField& density,
                                        int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<double> u(count);
  for (int i = 0; i < count; ++i) u[i] = uniform(rng);
  return quantile_positions(g, density, u);
}

// Two-sided Kolmogorov-Smirnov distance between sample positions and the
// distribution whose density is given on the grid.
inline double ks_statistic(std::vector<double> positions, const Grid& g,
                           const RealField& density) {
  fields::check_size(g, density.size(), "ks_statistic");
  const int n = g.points[0];
  const double h = g.step(0);
  std::vector<double> cdf(n + 1, 0.0);
  for (int j = 0; j < n; ++j)
    cdf[j + 1] = cdf[j] + h * (density[j] + density[(j + 1) % n]) / 2;
  double total = cdf[n];

  auto reference = [&](double x) {
    double u = (x - g.origin[0]) / h;
    int j = std::clamp(static_cast<int>(std::floor(u)), 0, n - 1);
    double frac = u - j;
    return std::clamp((cdf[j] + frac * (cdf[j + 1] - cdf[j])) / total, 0.0, 1.0);
  };

  for (double& x : positions) {
    double wind = std::floor((x - g.origin[0]) / g.extent[0]);
    x -= wind * g.extent[0];
  }
  std::sort(positions.begin(), positions.end());
  const double count = static_cast<double>(positions.size());
  double d = 0;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    double f = reference(positions[i]);
    d = std::max(d, std::abs(f - i / count));
    d = std::max(d, std::abs((i + 1) / count - f));
  }
  return d;
}

}  // namespace qhj::traj
