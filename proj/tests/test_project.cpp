#include "qhj/opalg/normalize.hpp"
#include "qhj/opalg/parse.hpp"
#include "qhj/opalg/print.hpp"
#include "qhj/opalg/project.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace qhj::opalg;

static OperatorExpr oper(const char* s) { return parse_operator_expr(s); }
static CNumberExpr cnum(const char* s) { return parse_cnumber_expr(s); }

TEST_CASE("pure function terms project unchanged") {
  CHECK(project_matrix_element(oper("R*V + c")) == cnum("R*V + c"));
}

TEST_CASE("a single phase derivative becomes the classical gradient") {
  CHECK(project_matrix_element(oper("R*b_i*dS/dq_i")) == cnum("R*d[S]/dq_i*b_i"));
  CHECK(project_matrix_element(oper("dS/dt")) == cnum("d[S]/dt"));
}

TEST_CASE("functions right of a phase derivative are rejected") {
  CHECK_THROWS_AS(project_matrix_element(oper("R*dS/dq_i*b_i")),
                  std::invalid_argument);
}

TEST_CASE("an adjacent pair picks up the quantum correction") {
  // <dS_x dS_y> = S_x S_y - i hbar S_xy
  CHECK(project_matrix_element(oper("A_ij*dS/dq_i*dS/dq_j")) ==
        cnum("A_ij*d[S]/dq_i*d[S]/dq_j - i*hbar*A_ij*d[S]/dq_i/dq_j"));
  CHECK(project_matrix_element(oper("dS/dt*dS/dt")) ==
        cnum("(d[S]/dt)^2 - i*hbar*d[d[S]/dt]/dt"));
}

TEST_CASE("spacetime pairs contract through the correction term") {
  CHECK(project_matrix_element(oper("dS/dq^mu*dS/dq_mu")) ==
        cnum("d[S]/dq^mu*d[S]/dq_mu - i*hbar*d[S]/dq^mu/dq_mu"));
}

TEST_CASE("three or more phase derivatives in a term are rejected") {
  CHECK_THROWS_AS(project_matrix_element(oper("dS/dq_i*dS/dq_i*dS/dt")),
                  MoreThanTwoSDerivs);
}

TEST_CASE("momenta must be substituted before projection") {
  CHECK_THROWS_AS(project_matrix_element(oper("p_i*p_i")), std::invalid_argument);
}

TEST_CASE("projection after normalization matches manual ordering") {
  // normalize moves dS right first; projection is applied to the normal form
  auto e = normalize(oper("dS/dq_i*R"));
  CHECK(project_matrix_element(e) == cnum("R*d[S]/dq_i - i*hbar*d[R]/dq_i"));
}
