#include "qhj/opalg/parse.hpp"
#include "qhj/opalg/print.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace qhj::opalg;

static CNumberExpr cnum(const char* s) { return parse_cnumber_expr(s); }
static OperatorExpr oper(const char* s) { return parse_operator_expr(s); }

TEST_CASE("c-number products commute and collect") {
  CHECK(cnum("R*V") == cnum("V*R"));
  CHECK(cnum("R + R") == cnum("2*R"));
  CHECK(cnum("R - R").terms().empty());
  CHECK(cnum("(R + V)*(R - V)") == cnum("R^2 - V^2"));
}

TEST_CASE("dummy summation indices are canonical") {
  CHECK(cnum("d[S]/dq_i*b_i") == cnum("d[S]/dq_j*b_j"));
  CHECK(cnum("b_i*b_i + b_j*b_j") == cnum("2*b_k*b_k"));
  // distinct dummy pairs in one term
  CHECK(cnum("A_ij*b_i*b_j*u_k*u_k") == cnum("A_kl*b_k*b_l*u_i*u_i"));
}

TEST_CASE("spacetime dummies match across variance placement") {
  CHECK(cnum("d[S]/dq^mu*d[S]/dq_mu") == cnum("d[S]/dq^nu*d[S]/dq_nu"));
  // a contracted pair is the same sum with the variance pattern flipped
  CHECK(cnum("b_mu*d[S]/dq^mu") == cnum("b^mu*d[S]/dq_mu"));
}

TEST_CASE("symmetric two-slot symbols ignore slot order") {
  CHECK(cnum("A_ij*b_i*u_j") == cnum("A_ji*b_i*u_j"));
}

TEST_CASE("operator factors do not commute") {
  CHECK(oper("dS/dq_i*R") != oper("R*dS/dq_i"));
  CHECK(oper("p_i*V") != oper("V*p_i"));
  // coordinate functions still commute among themselves
  CHECK(oper("R*V") == oper("V*R"));
}

TEST_CASE("power expansion and monomial inversion") {
  CHECK(pow_expr(cnum("2*R"), 3) == cnum("8*R^3"));
  CHECK(pow_expr(cnum("2*a"), -1) == cnum("(1/2)*a^-1"));
  CHECK(invert_monomial(cnum("R^2*V")) == cnum("R^-2*V^-1"));
  CHECK_THROWS_AS(invert_monomial(cnum("R + V")), std::invalid_argument);
  // a contracted product has no monomial inverse
  CHECK_THROWS_AS(invert_monomial(cnum("b_i*b_i")), std::invalid_argument);
}

TEST_CASE("operator product is associative and respects scalars") {
  auto a = oper("dS/dq_i*b_i");
  auto b = oper("R");
  auto c = oper("dS/dt");
  CHECK((a * b) * c == a * (b * c));
  CHECK(oper("2*R") * oper("3*V") == oper("6*R*V"));
}

TEST_CASE("like operator terms cancel exactly") {
  auto e = oper("dS/dq_i*R - dS/dq_i*R");
  CHECK(e.terms().empty());
}
