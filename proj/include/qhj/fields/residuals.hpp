#pragma once

#include "qhj/fields/grid.hpp"
#include "qhj/fields/polar.hpp"
#include "qhj/fields/spectral.hpp"

#include <json.hpp>

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace qhj::fields {

enum class EquationId {
  bohm_hj,        // phase equation with the full curvature potential
  general_hj,     // derived variant: half curvature + half gradient + drift
  generalized,    // generic coefficient fields a, b, c
  continuity,     // density transport
  kg_real,        // relativistic phase equation, full curvature form
  kg_final,       // relativistic phase equation, split half/half form
  kg_continuity,  // relativistic current conservation
};

inline std::string equation_name(EquationId id) {
  switch (id) {
    case EquationId::bohm_hj: return "bohm-hj";
    case EquationId::general_hj: return "general-hj";
    case EquationId::generalized: return "generalized";
    case EquationId::continuity: return "continuity";
    case EquationId::kg_real: return "kg-real";
    case EquationId::kg_final: return "kg-final";
    case EquationId::kg_continuity: return "kg-continuity";
  }
  throw std::invalid_argument("bad equation id");
}

inline EquationId parse_equation_id(const std::string& s) {
  for (auto id : {EquationId::bohm_hj, EquationId::general_hj, EquationId::generalized,
                  EquationId::continuity, EquationId::kg_real, EquationId::kg_final,
                  EquationId::kg_continuity})
    if (equation_name(id) == s) return id;
  throw std::invalid_argument("unknown equation id: " + s);
}

struct ResidualOptions {
  Scheme scheme = Scheme::spectral;
  double mask_eps = 1e-6;
};

struct ResidualReport {
  std::string equation;
  double time = 0;
  double max_norm = 0;
  double l2 = 0;  // amplitude-squared weighted
  double mask_fraction = 0;
  nlohmann::ordered_json extra;  // equation-specific diagnostics

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["equation"] = equation;
    j["time"] = time;
    j["masked_max_norm"] = max_norm;
    j["weighted_l2"] = l2;
    j["mask_fraction"] = mask_fraction;
    if (!extra.empty()) j["extra"] = extra;
    return j;
  }
};

struct ResidualResult {
  ResidualReport report;
  RealField residual;  // sentinel NaN on masked points
  Mask mask;
};

namespace detail {

constexpr double kSentinel = std::numeric_limits<double>::quiet_NaN();

inline void apply_mask(RealField& f, const Mask& mask) {
  for (std::size_t i = 0; i < f.size(); ++i)
    if (!mask[i]) f[i] = kSentinel;
}

inline ResidualResult finish(std::string equation, double time, RealField residual,
                             const RealField& amplitude, const Mask& mask) {
  apply_mask(residual, mask);
  ResidualResult out;
  out.report.equation = std::move(equation);
  out.report.time = time;
  out.report.max_norm = masked_max(residual, mask);
  out.report.l2 = weighted_l2(residual, amplitude, mask);
  out.report.mask_fraction = mask_fraction(mask);
  out.residual = std::move(residual);
  out.mask = mask;
  return out;
}

}  // namespace detail

// -(hbar^2/2m) lap(R)/R, sentinel NaN below the amplitude mask.
inline RealField quantum_potential(const Grid& g, const RealField& r,
                                   const Constants& constants,
                                   const ResidualOptions& opts = {}) {
  check_size(g, r.size(), "quantum_potential");
  auto lap = laplacian(g, r, opts.scheme);
  auto mask = amplitude_mask(r, opts.mask_eps);
  RealField out(r.size());
  const double scale = -constants.hbar * constants.hbar / (2 * constants.m);
  for (std::size_t i = 0; i < r.size(); ++i)
    out[i] = mask[i] ? scale * lap[i] / r[i] : detail::kSentinel;
  return out;
}

// -(hbar^2/2m) (grad R / R)^2 summed over axes; nonpositive by construction.
inline RealField quantum_kinetic(const Grid& g, const RealField& r,
                                 const Constants& constants,
                                 const ResidualOptions& opts = {}) {
  check_size(g, r.size(), "quantum_kinetic");
  auto mask = amplitude_mask(r, opts.mask_eps);
  RealField sum(r.size(), 0.0);
  for (int axis = 0; axis < g.dim; ++axis) {
    auto d = derivative(g, r, axis, 1, opts.scheme);
    for (std::size_t i = 0; i < r.size(); ++i) {
      double ratio = d[i] / r[i];
      sum[i] += ratio * ratio;
    }
  }
  const double scale = -constants.hbar * constants.hbar / (2 * constants.m);
  RealField out(r.size());
  for (std::size_t i = 0; i < r.size(); ++i)
    out[i] = mask[i] ? scale * sum[i] : detail::kSentinel;
  return out;
}

// Generic coefficient fields for the generalized phase equation.
struct CoefficientFields {
  RealField a;
  std::array<RealField, 2> b{};
  RealField c;
};

namespace detail {

inline RealField kinetic_term(const Grid& g, const PhaseFields& ph, double m) {
  RealField out(ph.amplitude.size(), 0.0);
  for (int axis = 0; axis < g.dim; ++axis)
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] += ph.grad_s[axis][i] * ph.grad_s[axis][i] / (2 * m);
  return out;
}

inline const RealField& zeros(std::size_t n) {
  static thread_local RealField z;
  if (z.size() != n) z.assign(n, 0.0);
  return z;
}

}  // namespace detail

// Pointwise left-hand side of the named nonrelativistic phase equation:
//   bohm-hj:    s_t + (grad S)^2/2m + QP + V
//   general-hj: s_t + (grad S)^2/2m + (QP+QK)/2 + Vv.grad S + V
// For general-hj the report's extra block quantifies (general-hj residual)
// minus (bohm-hj residual) against its closed form (QK-QP)/2.
inline ResidualResult hj_residual(const Grid& g, EquationId eq, const PhaseFields& ph,
                                  const RealField& potential,
                                  const std::array<RealField, 2>& drift,
                                  const Constants& constants,
                                  const ResidualOptions& opts = {}) {
  if (eq != EquationId::bohm_hj && eq != EquationId::general_hj)
    throw std::invalid_argument("hj_residual expects bohm-hj or general-hj");
  const std::size_t n = ph.amplitude.size();
  check_size(g, n, "hj_residual");
  auto mask = amplitude_mask(ph.amplitude, opts.mask_eps);
  auto qp = quantum_potential(g, ph.amplitude, constants, opts);
  auto qk = quantum_kinetic(g, ph.amplitude, constants, opts);
  auto kinetic = detail::kinetic_term(g, ph, constants.m);
  const RealField& v = potential.empty() ? detail::zeros(n) : potential;
  check_size(g, v.size(), "hj_residual potential");

  RealField drift_term(n, 0.0);
  if (eq == EquationId::general_hj) {
    for (int axis = 0; axis < g.dim; ++axis) {
      if (drift[axis].empty()) continue;
      check_size(g, drift[axis].size(), "hj_residual drift");
      for (std::size_t i = 0; i < n; ++i)
        drift_term[i] += drift[axis][i] * ph.grad_s[axis][i];
    }
  }
  RealField res(n);
  for (std::size_t i = 0; i < n; ++i) {
    double quantum = eq == EquationId::bohm_hj ? qp[i] : 0.5 * (qp[i] + qk[i]);
    res[i] = ph.s_t[i] + kinetic[i] + quantum + v[i] + drift_term[i];
  }

  auto out = detail::finish(equation_name(eq), ph.time, std::move(res),
                            ph.amplitude, mask);
  if (eq == EquationId::general_hj) {
    // (general-hj residual) - (bohm-hj residual) - drift must reproduce the
    // closed form (QK - QP)/2 built from the amplitude alone
    RealField diff(n);
    for (std::size_t i = 0; i < n; ++i) {
      double bohm = ph.s_t[i] + kinetic[i] + qp[i] + v[i];
      diff[i] = (out.residual[i] - bohm - drift_term[i]) - 0.5 * (qk[i] - qp[i]);
    }
    detail::apply_mask(diff, mask);
    out.report.extra["difference_vs_half_qk_minus_qp"] = masked_max(diff, mask);
  }
  return out;
}

// Generalized phase equation with caller-supplied coefficient fields:
//   s_t + (grad S)^2/2m - (hbar^2/8m) lap(a)/a + b.grad S / a + c / a
// Empty fields default to the identification a = R^2, b = R^2*Vv = 0, c = R^2*V = 0.
inline ResidualResult generalized_residual(const Grid& g, const PhaseFields& ph,
                                           CoefficientFields coeff,
                                           const Constants& constants,
                                           const ResidualOptions& opts = {}) {
  const std::size_t n = ph.amplitude.size();
  check_size(g, n, "generalized_residual");
  if (coeff.a.empty()) {
    coeff.a.resize(n);
    for (std::size_t i = 0; i < n; ++i) coeff.a[i] = ph.amplitude[i] * ph.amplitude[i];
  }
  check_size(g, coeff.a.size(), "generalized_residual a");
  if (coeff.c.empty()) coeff.c.assign(n, 0.0);
  check_size(g, coeff.c.size(), "generalized_residual c");

  auto mask = amplitude_mask(ph.amplitude, opts.mask_eps);
  auto lap_a = laplacian(g, coeff.a, opts.scheme);
  auto kinetic = detail::kinetic_term(g, ph, constants.m);
  const double h2_8m = constants.hbar * constants.hbar / (8 * constants.m);

  RealField res(n);
  for (std::size_t i = 0; i < n; ++i) {
    res[i] = ph.s_t[i] + kinetic[i] - h2_8m * lap_a[i] / coeff.a[i] +
             coeff.c[i] / coeff.a[i];
  }
  for (int axis = 0; axis < g.dim; ++axis) {
    if (coeff.b[axis].empty()) continue;
    check_size(g, coeff.b[axis].size(), "generalized_residual b");
    for (std::size_t i = 0; i < n; ++i)
      res[i] += coeff.b[axis][i] * ph.grad_s[axis][i] / coeff.a[i];
  }
  return detail::finish(equation_name(EquationId::generalized), ph.time,
                        std::move(res), ph.amplitude, mask);
}

// rho_t + div(current)/m, with the current taken straight from psi so the
// product R^2 grad S never divides by a small amplitude.
inline ResidualResult continuity_residual(const Grid& g, const PhaseFields& ph,
                                          const Constants& constants,
                                          const ResidualOptions& opts = {}) {
  const std::size_t n = ph.amplitude.size();
  check_size(g, n, "continuity_residual");
  auto mask = amplitude_mask(ph.amplitude, opts.mask_eps);
  RealField res = ph.rho_t;
  for (int axis = 0; axis < g.dim; ++axis) {
    auto dj = derivative(g, ph.current[axis], axis, 1, opts.scheme);
    for (std::size_t i = 0; i < n; ++i) res[i] += dj[i] / constants.m;
  }
  return detail::finish(equation_name(EquationId::continuity), ph.time,
                        std::move(res), ph.amplitude, mask);
}

// Relativistic bundle: first and second time derivatives of amplitude and
// phase recovered from (phi, phi_dot), with phi_ddot supplied by the field
// equation phi_tt = c^2 lap(phi) - (m0^2 c^4 / hbar^2) phi.
struct KgFields {
  double time = 0;
  RealField amplitude;
  std::array<RealField, 2> grad_s{};
  RealField lap_s;
  std::array<RealField, 2> current{};
  RealField s_t, s_tt;
  RealField r_t, r_tt;
  RealField rho_t;
};

inline KgFields kg_fields(const Grid& g, const ComplexField& phi,
                          const ComplexField& phi_dot, double time,
                          const Constants& constants, Scheme scheme) {
  check_size(g, phi.size(), "kg_fields");
  check_size(g, phi_dot.size(), "kg_fields");
  const std::size_t n = phi.size();
  const double hbar = constants.hbar;
  const double c2 = constants.c_light * constants.c_light;
  const double mu2 = constants.m0 * constants.m0 * c2 * c2 / (hbar * hbar);

  auto base = phase_fields(g, phi, phi_dot, time, constants, scheme);
  KgFields out;
  out.time = time;
  out.amplitude = std::move(base.amplitude);
  out.grad_s = std::move(base.grad_s);
  out.lap_s = std::move(base.lap_s);
  out.current = std::move(base.current);
  out.s_t = std::move(base.s_t);
  out.rho_t = std::move(base.rho_t);

  ComplexField phi_ddot = derivative(g, phi, 0, 2, scheme);
  if (g.dim == 2) {
    auto dyy = derivative(g, phi, 1, 2, scheme);
    for (std::size_t i = 0; i < n; ++i) phi_ddot[i] += dyy[i];
  }
  for (std::size_t i = 0; i < n; ++i) phi_ddot[i] = c2 * phi_ddot[i] - mu2 * phi[i];

  out.s_tt.resize(n);
  out.r_t.resize(n);
  out.r_tt.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto ratio1 = phi_dot[i] / phi[i];
    out.s_tt[i] = hbar * std::imag(phi_ddot[i] / phi[i] - ratio1 * ratio1);
    double r = out.amplitude[i];
    out.r_t[i] = std::real(std::conj(phi[i]) * phi_dot[i]) / r;
    out.r_tt[i] = (std::norm(phi_dot[i]) + std::real(std::conj(phi[i]) * phi_ddot[i]) -
                   out.r_t[i] * out.r_t[i]) /
                  r;
  }
  return out;
}

// Relativistic residuals with metric signature (+,-,-,-) and q^0 = c t:
//   kg-real:       dS.dS/2m0 - m0 c^2/2 - (hbar^2/2m0) box(R)/R
//   kg-final:      dS.dS/2m0 - m0 c^2/2 - (hbar^2/4m0) [box(R)/R + dR.dR/R^2]
//   kg-continuity: d_mu(R^2 d^mu S) = (rho_t s_t + R^2 s_tt)/c^2 - div(current)
// where dX.dX = (X_t/c)^2 - (grad X)^2 and box(X) = X_tt/c^2 - lap(X).
inline ResidualResult kg_residual(const Grid& g, EquationId eq, const KgFields& kg,
                                  const Constants& constants,
                                  const ResidualOptions& opts = {}) {
  const std::size_t n = kg.amplitude.size();
  check_size(g, n, "kg_residual");
  auto mask = amplitude_mask(kg.amplitude, opts.mask_eps);
  const double c2 = constants.c_light * constants.c_light;
  const double m0 = constants.m0;
  const double hbar2 = constants.hbar * constants.hbar;

  RealField res(n);
  if (eq == EquationId::kg_continuity) {
    for (std::size_t i = 0; i < n; ++i) {
      double r2 = kg.amplitude[i] * kg.amplitude[i];
      res[i] = (kg.rho_t[i] * kg.s_t[i] + r2 * kg.s_tt[i]) / c2;
    }
    for (int axis = 0; axis < g.dim; ++axis) {
      auto dj = derivative(g, kg.current[axis], axis, 1, opts.scheme);
      for (std::size_t i = 0; i < n; ++i) res[i] -= dj[i];
    }
  } else if (eq == EquationId::kg_real || eq == EquationId::kg_final) {
    auto lap_r = laplacian(g, kg.amplitude, opts.scheme);
    RealField grad_r2(n, 0.0);  // (grad R)^2 summed over axes
    for (int axis = 0; axis < g.dim; ++axis) {
      auto d = derivative(g, kg.amplitude, axis, 1, opts.scheme);
      for (std::size_t i = 0; i < n; ++i) grad_r2[i] += d[i] * d[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      double ds_ds = kg.s_t[i] * kg.s_t[i] / c2;
      for (int axis = 0; axis < g.dim; ++axis)
        ds_ds -= kg.grad_s[axis][i] * kg.grad_s[axis][i];
      double r = kg.amplitude[i];
      double box_r = kg.r_tt[i] / c2 - lap_r[i];
      double dr_dr = kg.r_t[i] * kg.r_t[i] / c2 - grad_r2[i];
      res[i] = ds_ds / (2 * m0) - m0 * c2 / 2;
      if (eq == EquationId::kg_real)
        res[i] -= hbar2 / (2 * m0) * box_r / r;
      else
        res[i] -= hbar2 / (4 * m0) * (box_r / r + dr_dr / (r * r));
    }
  } else {
    throw std::invalid_argument("kg_residual expects a relativistic equation id");
  }
  return detail::finish(equation_name(eq), kg.time, std::move(res), kg.amplitude,
                        mask);
}

}  // namespace qhj::fields
