#pragma once

#include "qhj/derive/goldens.hpp"
#include "qhj/derive/report.hpp"
#include "qhj/opalg/calculus.hpp"
#include "qhj/opalg/normalize.hpp"
#include "qhj/opalg/parse.hpp"
#include "qhj/opalg/print.hpp"
#include "qhj/opalg/project.hpp"
#include "qhj/opalg/weyl.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qhj::derive {

namespace detail {

inline StepResult make_step(std::string step_label, std::string_view golden_label,
                            std::string note, const opalg::OperatorExpr& produced) {
  auto text = golden(golden_label);
  auto expected = opalg::parse_operator_expr(text);
  return {std::move(step_label), std::move(note), opalg::to_string(produced),
          opalg::to_string(expected), std::string(text),
          opalg::expr_equal(produced, expected)};
}

inline StepResult make_step(std::string step_label, std::string_view golden_label,
                            std::string note, const opalg::CNumberExpr& produced) {
  auto text = golden(golden_label);
  auto expected = opalg::parse_cnumber_expr(text);
  return {std::move(step_label), std::move(note), opalg::to_string(produced),
          opalg::to_string(expected), std::string(text),
          opalg::expr_equal(produced, expected)};
}

inline StepResult make_step(std::string label, std::string note, const auto& produced) {
  return make_step(label, label, std::move(note), produced);
}

inline opalg::CNumberExpr cnum(std::string_view text) {
  return opalg::parse_cnumber_expr(text);
}

// Divide by -hbar: strips the scale the imaginary part carries.
inline opalg::Coeff neg_inv_hbar() {
  opalg::Coeff c = opalg::Coeff::one();
  c.value = -1;
  c.hbar = -1;
  return c;
}

inline opalg::Coeff scaled(long long num, long long den, int hbar = 0, int m0 = 0) {
  opalg::Coeff c = opalg::Coeff::one();
  c.value = opalg::Rational(num, den);
  c.hbar = hbar;
  c.rest_mass = m0;
  return c;
}

// Replays the operator chain for one coefficient template and returns the
// combined c-number form scaled to the conventional normalization (twice the
// raw matrix element).
inline opalg::CNumberExpr combined_cnumber(const opalg::HamiltonianSpec& spec) {
  auto hamiltonian = opalg::build_weyl_hamiltonian(spec);
  auto with_action = opalg::substitute_momenta(hamiltonian, spec);
  auto ordered = opalg::normalize(with_action);
  auto projected = opalg::project_matrix_element(ordered);
  return scaled(2, 1) * projected;
}

}  // namespace detail

// Generic nonrelativistic template: operator equation, matrix element,
// real/imaginary split, identity-metric reduction, classical limit.
inline DerivationReport derive_nonrel_general() {
  using namespace opalg;
  DerivationReport report;
  report.pipeline = "nonrel-general";

  HamiltonianSpec spec;
  auto hamiltonian = build_weyl_hamiltonian(spec);
  report.add(detail::make_step("weyl-hamiltonian",
                               "symmetrized momentum ordering", hamiltonian));

  auto with_action = substitute_momenta(hamiltonian, spec);
  report.add(detail::make_step(
      "qhj-operator",
      "p_i -> dS/dq_i; symmetrized energy pair appended", with_action));

  auto combined = detail::scaled(2, 1) * project_matrix_element(normalize(with_action));
  report.add(detail::make_step(
      "cnumber-combined", "matrix element scaled by 2", combined));

  auto [re, im] = split_real_imag(combined);
  auto real_part = re * pow_expr(detail::cnum("2*a"), -1);
  report.add(detail::make_step("real-part", "real part divided by 2*a", real_part));

  auto imag_part = detail::neg_inv_hbar() * im;
  report.add(detail::make_step("imag-part",
                               "imaginary part divided by -hbar", imag_part));

  auto id_real = substitute_identity_metric(real_part);
  report.add(detail::make_step("identity-real", "metric set to the identity", id_real));

  auto id_imag = substitute_identity_metric(imag_part);
  report.add(detail::make_step("identity-imag", "metric set to the identity", id_imag));

  HamiltonianSpec classical;
  classical.a.reset();
  classical.metric.reset();
  classical.b.reset();
  classical.c = "V";
  auto cls = detail::combined_cnumber(classical);
  auto [cls_re, cls_im] = split_real_imag(cls);
  report.add(detail::make_step(
      "classical-hj", "a=1, identity metric, b=0, c=V; real part divided by 2",
      detail::scaled(1, 2) * cls_re));
  report.add(detail::make_step(
      "classical-continuity",
      "a=1, identity metric, b=0, c=V; imaginary part divided by -hbar",
      detail::neg_inv_hbar() * cls_im));

  report.notes.push_back(
      "the classical real part carries no hbar factors: every quantum "
      "correction enters through the commutator terms that the constant "
      "coefficients suppress");
  return report;
}

// Coefficient identification a=R^2, b_i=R^2*Vv_i, c=R^2*V: the single-particle
// phase and amplitude equations, plus the stored potential-term identities.
inline DerivationReport derive_nonrel_bohm() {
  using namespace opalg;
  DerivationReport report;
  report.pipeline = "nonrel-bohm";

  // Recompute the identity-metric forms end to end; the nonrel-general
  // pipeline gates each intermediate.
  HamiltonianSpec spec;
  auto combined = detail::combined_cnumber(spec);
  auto [re, im] = split_real_imag(combined);
  auto id_real = substitute_identity_metric(re * pow_expr(detail::cnum("2*a"), -1));
  auto id_imag = substitute_identity_metric(detail::neg_inv_hbar() * im);

  Bindings ident;
  ident["a"] = {{}, detail::cnum("R^2")};
  ident["b"] = {{spatial(0)}, detail::cnum("R^2*Vv_i")};
  ident["c"] = {{}, detail::cnum("R^2*V")};

  auto hj = substitute_functions(id_real, ident);
  report.add(detail::make_step(
      "bohm-hj", "a=R^2, b_i=R^2*Vv_i, c=R^2*V in the identity-metric real part",
      hj));

  auto continuity = substitute_functions(drop_divergence_terms(id_imag, "b"), ident);
  report.add(detail::make_step(
      "bohm-continuity",
      "divergence-free b dropped, then a=R^2 in the identity-metric imaginary part",
      continuity));

  Bindings potentials;
  potentials["QP"] = {{}, detail::cnum(golden("qp-definition"))};
  potentials["QK"] = {{}, detail::cnum(golden("qk-definition"))};
  auto half = substitute_functions(detail::cnum(golden("half-form")), potentials);
  report.add(detail::make_step(
      "half-form", "bohm-hj",
      "stored QP and QK definitions substituted; must equal bohm-hj", half));

  auto qp = detail::cnum(golden("qp-definition"));
  auto qk = detail::cnum(golden("qk-definition"));
  report.add(detail::make_step("qpqk-divergence",
                               "QP + QK collapsed to a single divergence",
                               qp + qk));
  report.add(detail::make_step("half-sum-laplacian",
                               "(QP + QK)/2 collapsed to a single laplacian",
                               detail::scaled(1, 2) * (qp + qk)));

  report.notes.push_back(
      "derived amplitude equation coincides with continuity-reference: " +
      std::string(expr_equal(continuity, detail::cnum(golden("continuity-reference")))
                      ? "yes"
                      : "no"));
  report.notes.push_back(
      "bohm-hj minus hj-reference = " +
      to_string(hj - detail::cnum(golden("hj-reference"))) +
      " (half the difference of the two quantum potential terms plus the "
      "drift coupling)");
  return report;
}

// Relativistic template with scalar coefficients: four-momentum substitution,
// split, coefficient identification alpha=R^2, b=0, m -> m0, and the solve
// for the constant-density coefficient c.
inline DerivationReport derive_relativistic() {
  using namespace opalg;
  DerivationReport report;
  report.pipeline = "relativistic";

  HamiltonianSpec spec;
  spec.regime = Regime::relativistic;
  spec.metric.reset();
  auto hamiltonian = build_weyl_hamiltonian(spec);
  report.add(detail::make_step("rel-weyl",
                               "symmetrized four-momentum ordering", hamiltonian));

  auto with_action = substitute_momenta(hamiltonian, spec);
  auto combined = project_matrix_element(normalize(with_action));
  report.add(detail::make_step(
      "rel-cnumber", "p^mu -> -dS/dq^mu; matrix element taken", combined));
  report.notes.push_back(
      "reported-rel-cnumber minus rel-cnumber = " +
      to_string(detail::cnum(golden("reported-rel-cnumber")) - combined) +
      " (with the kinetic terms aligned, the published combined form doubles "
      "the c and b*dS terms and flips the sign of the b divergence)");

  Bindings alpha_for_a;
  alpha_for_a["a"] = {{}, detail::cnum("(1/(2*m))*alpha")};
  auto in_alpha = substitute_functions(combined, alpha_for_a);
  auto [re, im] = split_real_imag(in_alpha);
  auto real_part = re * pow_expr(detail::cnum("alpha"), -1);
  report.add(detail::make_step("rel-real",
                               "a = alpha/(2*m); real part divided by alpha",
                               real_part));
  report.notes.push_back(
      "reported-rel-real minus rel-real = " +
      to_string(detail::cnum(golden("reported-rel-real")) - real_part) +
      " (the published form doubles the c and b terms)");

  auto imag_part = detail::scaled(2, 1, -1) * im;
  report.add(detail::make_step("rel-imag",
                               "imaginary part scaled by 2/hbar", imag_part));
  report.notes.push_back(
      "reported-rel-imag minus rel-imag = " +
      to_string(detail::cnum(golden("reported-rel-imag")) - imag_part) +
      " (the published form flips the sign of the current divergence)");
  report.notes.push_back(
      "the coordinate-derivative correction keeps the index variance of the "
      "differentiated factor; the published commutator prints a flipped "
      "variance, which would leave a non-contracting index pair");

  Bindings free_case;
  free_case["alpha"] = {{}, detail::cnum("R^2")};
  free_case["b"] = {{lower(0)}, CNumberExpr{}};
  auto real_free = identify_mass_with_rest_mass(substitute_functions(real_part, free_case));
  auto target = detail::cnum(golden("kg-final"));
  auto c_solved = solve_linear(real_free - target, "c");
  report.add(detail::make_step(
      "c-coefficient",
      "alpha=R^2, b=0, m -> m0; c solved so the real part reproduces kg-final",
      c_solved));

  for (std::string_view candidate :
       {"c-coefficient", "reported-c-halved", "reported-c-printed"}) {
    Bindings with_c;
    with_c["c"] = {{}, detail::cnum(golden(candidate))};
    auto residual = substitute_functions(real_free, with_c) - target;
    report.notes.push_back(std::string(candidate) + " = " +
                           std::string(golden(candidate)) +
                           " leaves residual " + to_string(residual));
  }
  report.notes.push_back(
      "reported-c-printed carries an extra factor of m0 relative to both "
      "other candidates and is not dimensionally consistent with the "
      "potential-free energy density");

  Bindings with_solved_c;
  with_solved_c["c"] = {{}, c_solved};
  auto kg_final = substitute_functions(real_free, with_solved_c);
  report.add(detail::make_step("kg-final", "solved c substituted", kg_final));

  auto imag_free = identify_mass_with_rest_mass(substitute_functions(imag_part, free_case));
  report.add(detail::make_step("kg-continuity",
                               "alpha=R^2, b=0, m -> m0; scaled by -m0",
                               detail::scaled(-1, 1, 0, 1) * imag_free));

  Bindings unit_amplitude;
  unit_amplitude["R"] = {{}, CNumberExpr::one()};
  auto shell = substitute_functions(kg_final, unit_amplitude);
  report.add(detail::make_step("mass-shell", "R=1; scaled by 2*m0",
                               detail::scaled(2, 1, 0, 1) * shell));

  report.notes.push_back(
      "kg-final minus kg-reference = " +
      to_string(kg_final - detail::cnum(golden("kg-reference"))) +
      " (the derived form splits the reference curvature term into curvature "
      "and gradient-squared halves)");
  return report;
}

inline std::vector<std::string_view> pipeline_names() {
  return {"nonrel-general", "nonrel-bohm", "relativistic"};
}

inline DerivationReport run_pipeline(std::string_view name) {
  if (name == "nonrel-general") return derive_nonrel_general();
  if (name == "nonrel-bohm") return derive_nonrel_bohm();
  if (name == "relativistic") return derive_relativistic();
  throw std::invalid_argument("unknown pipeline: " + std::string(name));
}

}  // namespace qhj::derive
