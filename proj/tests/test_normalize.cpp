#include "qhj/opalg/normalize.hpp"
#include "qhj/opalg/parse.hpp"
#include "qhj/opalg/print.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace qhj::opalg;

static OperatorExpr oper(const char* s) { return parse_operator_expr(s); }

TEST_CASE("derivative factors move right with the commutator correction") {
  // D * F = F * D - i hbar dF/d(dir)
  CHECK(normalize(oper("dS/dq_i*R")) ==
        oper("R*dS/dq_i - i*hbar*d[R]/dq_i"));
  CHECK(normalize(oper("dS/dt*R")) == oper("R*dS/dt - i*hbar*d[R]/dt"));
  CHECK(normalize(oper("p_i*V")) == oper("V*p_i - i*hbar*d[V]/dq_i"));
}

TEST_CASE("normalization is idempotent") {
  auto e = oper("dS/dq_i*R*dS/dq_i*V + p_j*R^2");
  auto n = normalize(e);
  CHECK(normalize(n) == n);
}

TEST_CASE("already ordered expressions are fixed points") {
  auto e = oper("R*V*dS/dq_i + V*p_j");
  CHECK(normalize(e) == e);
}

TEST_CASE("double rewrite distributes through a product of two functions") {
  // dS R V: two rewrites, one per function factor
  CHECK(normalize(oper("dS/dq_i*R*V")) ==
        oper("R*V*dS/dq_i - i*hbar*d[R]/dq_i*V - i*hbar*R*d[V]/dq_i"));
}

TEST_CASE("spacetime rewrite preserves the variance of the derivative") {
  // moving dS/dq^mu across b_mu keeps the contraction intact
  auto n = normalize(oper("dS/dq^mu*b_mu"));
  CHECK(n == oper("b_mu*dS/dq^mu - i*hbar*d[b_mu]/dq^mu"));
}

TEST_CASE("scalar terms are untouched") {
  auto e = oper("c + 2*V");
  CHECK(normalize(e) == e);
}
