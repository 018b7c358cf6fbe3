#pragma once

#include "qhj/fields/grid.hpp"
#include "qhj/fields/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace qhj::fields {

struct AllZero : std::runtime_error {
  AllZero() : std::runtime_error("polar decomposition of an identically zero field") {}
};

struct PolarPair {
  RealField amplitude;  // R = |psi|
  RealField action;     // S = hbar * unwrapped arg(psi)
};

namespace detail {

// Continue `phase` from the already-fixed value at `anchor` along one line,
// removing 2*pi jumps. Indices are start + j*stride, j in [0, n).
inline void unwrap_line(std::vector<double>& phase, int start, int stride, int n,
                        int anchor) {
  constexpr double tau = 2 * std::numbers::pi;
  auto at = [&](int j) -> double& { return phase[start + j * stride]; };
  for (int dir : {1, -1}) {
    double prev = at(anchor);
    for (int j = anchor + dir; j >= 0 && j < n; j += dir) {
      double raw = at(j);
      double adjusted = raw + tau * std::round((prev - raw) / tau);
      at(j) = adjusted;
      prev = adjusted;
    }
  }
}

}  // namespace detail

// R = |psi|; S = hbar * arg(psi) unwrapped outward from the point of maximum
// amplitude (2D: along the max row, then each column from that row). Unreliable
// across nodal lines, which the amplitude mask excludes.
inline PolarPair polar_decompose(const Grid& g, const ComplexField& psi,
                                 const Constants& constants) {
  check_size(g, psi.size(), "polar_decompose");
  PolarPair out;
  out.amplitude.resize(psi.size());
  std::vector<double> phase(psi.size());
  int peak = 0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    out.amplitude[i] = std::abs(psi[i]);
    phase[i] = std::arg(psi[i]);
    if (out.amplitude[i] > out.amplitude[peak]) peak = static_cast<int>(i);
  }
  if (out.amplitude[peak] == 0) throw AllZero();

  if (g.dim == 1) {
    detail::unwrap_line(phase, 0, 1, g.points[0], peak);
  } else {
    const int nx = g.points[0], ny = g.points[1];
    const int peak_row = peak / ny, peak_col = peak % ny;
    detail::unwrap_line(phase, peak_row * ny, 1, ny, peak_col);
    for (int iy = 0; iy < ny; ++iy) detail::unwrap_line(phase, iy, ny, nx, peak_row);
  }

  out.action.resize(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) out.action[i] = constants.hbar * phase[i];
  return out;
}

// Everything residual evaluation needs at one instant, with every phase
// derivative taken from psi itself (never from the unwrapped action field,
// whose derivative is not meaningful across branch adjustments):
//   grad S   = hbar * Im(conj(psi) d_psi) / R^2
//   lap S    = hbar * Im(lap_psi/psi - sum_axis (d_psi/psi)^2)
//   current  = hbar * Im(conj(psi) d_psi)          (equals R^2 grad S)
//   s_t      = hbar * Im(psi_dot / psi)
//   rho_t    = 2 Re(conj(psi) psi_dot)
struct PhaseFields {
  double time = 0;
  RealField amplitude;                 // R
  std::array<RealField, 2> grad_s{};   // per axis
  RealField lap_s;
  std::array<RealField, 2> current{};  // momentum density per axis
  RealField s_t;
  RealField rho_t;
};

inline PhaseFields phase_fields(const Grid& g, const ComplexField& psi,
                                const ComplexField& psi_dot, double time,
                                const Constants& constants, Scheme scheme) {
  check_size(g, psi.size(), "phase_fields");
  check_size(g, psi_dot.size(), "phase_fields");
  const double hbar = constants.hbar;
  const std::size_t n = psi.size();
  PhaseFields out;
  out.time = time;
  out.amplitude.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.amplitude[i] = std::abs(psi[i]);

  out.lap_s.assign(n, 0.0);
  for (int axis = 0; axis < g.dim; ++axis) {
    auto d1 = derivative(g, psi, axis, 1, scheme);
    auto d2 = derivative(g, psi, axis, 2, scheme);
    out.grad_s[axis].resize(n);
    out.current[axis].resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      double j = hbar * std::imag(std::conj(psi[i]) * d1[i]);
      out.current[axis][i] = j;
      double r2 = std::norm(psi[i]);
      out.grad_s[axis][i] = j / r2;
      auto ratio1 = d1[i] / psi[i];
      out.lap_s[i] += hbar * std::imag(d2[i] / psi[i] - ratio1 * ratio1);
    }
  }

  out.s_t.resize(n);
  out.rho_t.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.s_t[i] = hbar * std::imag(psi_dot[i] / psi[i]);
    out.rho_t[i] = 2 * std::real(std::conj(psi[i]) * psi_dot[i]);
  }
  return out;
}

// Midpoint variant from two stored slices dt apart: time derivatives by
// centered differences (the phase one via the branch-free argument of the
// slice ratio), spatial fields from the averaged slice. Second order in dt.
inline PhaseFields phase_fields_midpoint(const Grid& g, const ComplexField& a,
                                         const ComplexField& b, double t_mid,
                                         double dt, const Constants& constants,
                                         Scheme scheme) {
  check_size(g, a.size(), "phase_fields_midpoint");
  check_size(g, b.size(), "phase_fields_midpoint");
  const std::size_t n = a.size();
  ComplexField mid(n);
  for (std::size_t i = 0; i < n; ++i) mid[i] = 0.5 * (a[i] + b[i]);
  ComplexField zero(n, 0.0);
  PhaseFields out = phase_fields(g, mid, zero, t_mid, constants, scheme);
  for (std::size_t i = 0; i < n; ++i) {
    out.s_t[i] = constants.hbar * std::arg(b[i] / a[i]) / dt;
    out.rho_t[i] = (std::norm(b[i]) - std::norm(a[i])) / dt;
  }
  return out;
}

}  // namespace qhj::fields
