#include "qhj/opalg/calculus.hpp"
#include "qhj/opalg/parse.hpp"
#include "qhj/opalg/print.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace qhj::opalg;

static CNumberExpr cnum(const char* s) { return parse_cnumber_expr(s); }

TEST_CASE("derivative obeys the product and power rules") {
  CHECK(derivative(cnum("R*V"), Dir::t()) ==
        cnum("d[R]/dt*V + R*d[V]/dt"));
  CHECK(derivative(cnum("R^2"), Dir::q(spatial(0))) ==
        cnum("2*R*d[R]/dq_i"));
  CHECK(derivative(cnum("R^-1"), Dir::q(spatial(0))) ==
        cnum("-R^-2*d[R]/dq_i"));
}

TEST_CASE("constants have vanishing derivatives") {
  CHECK(derivative(cnum("hbar*m*c_light"), Dir::t()).terms().empty());
}

TEST_CASE("mixed second derivatives commute") {
  auto d_ij = derivative(derivative(cnum("R"), Dir::q(spatial(0))), Dir::q(spatial(1)));
  auto d_ji = derivative(derivative(cnum("R"), Dir::q(spatial(1))), Dir::q(spatial(0)));
  CHECK(d_ij == d_ji);
}

TEST_CASE("differentiating a contraction keeps the direction index free") {
  CHECK(derivative(cnum("b_i*b_i"), Dir::q(spatial(2))) ==
        cnum("2*b_i*d[b_i]/dq_k"));
  // a colliding dummy is renamed away from the direction index
  CHECK(derivative(cnum("b_i*b_i"), Dir::q(spatial(0))) ==
        cnum("2*b_j*d[b_j]/dq_i"));
}

TEST_CASE("substitute_functions rewrites with parameter renaming") {
  Bindings bind;
  bind["a"] = {{}, cnum("R^2")};
  bind["b"] = {{spatial(0)}, cnum("R^2*Vv_i")};
  auto e = substitute_functions(cnum("a*b_j*b_j"), bind);
  CHECK(e == cnum("R^6*Vv_j*Vv_j"));
  // derivatives of bound functions substitute through the chain rule
  auto de = substitute_functions(cnum("d[a]/dt"), bind);
  CHECK(de == cnum("2*R*d[R]/dt"));
}

TEST_CASE("binding arity mismatches are rejected") {
  Bindings bind;
  bind["b"] = {{}, cnum("R")};
  CHECK_THROWS_AS(substitute_functions(cnum("b_i*b_i"), bind), std::invalid_argument);
}

TEST_CASE("identity metric substitution contracts the two slots") {
  CHECK(substitute_identity_metric(cnum("A_ij*d[S]/dq_i*d[S]/dq_j")) ==
        cnum("(d[S]/dq_i)^2"));
  CHECK(substitute_identity_metric(cnum("A_ij*b_i*u_j + V")) == cnum("b_i*u_i + V"));
}

TEST_CASE("divergence terms of a named vector are dropped") {
  auto e = cnum("d[b_i]/dq_i + V + b_i*d[S]/dq_i");
  CHECK(drop_divergence_terms(e, "b") == cnum("V + b_i*d[S]/dq_i"));
}

TEST_CASE("split by i-grading") {
  auto [re, im] = split_real_imag(cnum("V + i*hbar*R - 3*i*d[S]/dt"));
  CHECK(re == cnum("V"));
  // the imaginary part is reported with the unit i stripped
  CHECK(im == cnum("hbar*R - 3*d[S]/dt"));
}

TEST_CASE("solve_linear isolates an undifferentiated symbol") {
  auto eq = cnum("2*c + R^2*V - hbar*d[R]/dt");
  auto c = solve_linear(eq, "c");
  CHECK(c == cnum("-1/2*R^2*V + 1/2*hbar*d[R]/dt"));
  // substituting back annihilates the equation
  Bindings bind;
  bind["c"] = {{}, c};
  CHECK(substitute_functions(eq, bind).terms().empty());
}

TEST_CASE("solve_linear failure modes") {
  CHECK_THROWS_AS(solve_linear(cnum("c^2 + V"), "c"), std::invalid_argument);
  CHECK_THROWS_AS(solve_linear(cnum("d[c]/dt + V"), "c"), std::invalid_argument);
  CHECK_THROWS_AS(solve_linear(cnum("R + V"), "c"), std::invalid_argument);
}

TEST_CASE("identify_mass_with_rest_mass folds m into m0") {
  CHECK(identify_mass_with_rest_mass(cnum("1/2*m^-1*(d[S]/dq_i)^2 + m*c_light^2*R")) ==
        cnum("1/2*m0^-1*(d[S]/dq_i)^2 + m0*c_light^2*R"));
}
