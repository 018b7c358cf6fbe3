#pragma once

#include "qhj/opalg/expr.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qhj::opalg {

enum class Regime { nonrelativistic, relativistic };

// Template Hamiltonian H = sum_ij a_ij p_i p_j + sum_i b_i p_i + c with
// a_ij = a A_ij / 2m (nonrelativistic) or H = a p^mu p_mu + b_mu p^mu + c.
// Empty optionals collapse: a -> 1, metric -> identity, b -> 0, c -> 0.
struct HamiltonianSpec {
  Regime regime = Regime::nonrelativistic;
  std::optional<std::string> a = "a";
  std::optional<std::string> metric = "A";
  std::optional<std::string> b = "b";
  std::optional<std::string> c = "c";
};

namespace detail {

inline void check_symbol(const std::optional<std::string>& s, int arity) {
  if (!s) return;
  if (symbol_info(*s).arity != arity)
    throw std::invalid_argument("symbol '" + *s + "' has the wrong index arity");
}

}  // namespace detail

// Weyl-ordered quadratic Hamiltonian: each p p coefficient enters as the
// symmetric (1/4, 1/2, 1/4) pattern, each linear coefficient as (1/2, 1/2).
inline OperatorExpr build_weyl_hamiltonian(const HamiltonianSpec& spec) {
  detail::check_symbol(spec.a, 0);
  detail::check_symbol(spec.b, 1);
  detail::check_symbol(spec.c, 0);
  bool rel = spec.regime == Regime::relativistic;
  if (rel && spec.metric)
    throw std::invalid_argument("the relativistic form has no metric symbol");
  if (!rel) detail::check_symbol(spec.metric, 2);

  std::vector<OpTerm> terms;
  Index i0 = rel ? lower(0) : spatial(0);
  Index i1 = rel ? lower(1) : spatial(1);
  MomentumFactor p_first{rel ? upper(0) : i0};
  MomentumFactor p_second{rel ? lower(0) : i1};
  if (!rel && !spec.metric) p_second = p_first;  // identity metric: p_i p_i

  std::vector<OpFactor> coeff_factors;
  if (spec.a) coeff_factors.push_back(FnFactor{*spec.a, {}, {}, 1});
  if (!rel && spec.metric)
    coeff_factors.push_back(FnFactor{*spec.metric, {i0, i1}, {}, 1});

  // quarter/half/quarter sandwich; nonrelativistic carries the 1/2m scale
  Coeff quarter{Rational(1, 4), 0, 0, rel ? 0 : -1, 0, 0};
  if (!rel) quarter.value /= 2;
  Coeff half = quarter;
  half.value *= 2;

  auto sandwich = [&](std::vector<OpFactor> pre, Coeff c) {
    OpTerm t;
    t.coeff = c;
    t.factors = std::move(pre);
    terms.push_back(std::move(t));
  };

  {
    std::vector<OpFactor> fs = coeff_factors;
    fs.push_back(p_first);
    fs.push_back(p_second);
    sandwich(std::move(fs), quarter);
  }
  {
    std::vector<OpFactor> fs;
    fs.push_back(p_first);
    fs.insert(fs.end(), coeff_factors.begin(), coeff_factors.end());
    fs.push_back(p_second);
    sandwich(std::move(fs), half);
  }
  {
    std::vector<OpFactor> fs;
    fs.push_back(p_first);
    fs.push_back(p_second);
    fs.insert(fs.end(), coeff_factors.begin(), coeff_factors.end());
    sandwich(std::move(fs), quarter);
  }

  if (spec.b) {
    Index bi = rel ? lower(0) : spatial(0);
    MomentumFactor pb{rel ? upper(0) : spatial(0)};
    Coeff chalf = Coeff::rational(Rational(1, 2));
    terms.push_back(OpTerm{chalf, {FnFactor{*spec.b, {bi}, {}, 1}, pb}});
    terms.push_back(OpTerm{chalf, {pb, FnFactor{*spec.b, {bi}, {}, 1}}});
  }
  if (spec.c) terms.push_back(OpTerm{Coeff::one(), {FnFactor{*spec.c, {}, {}, 1}}});

  return OperatorExpr(std::move(terms));
}

// p_i -> dS/dq_i (nonrelativistic, plus the Weyl-symmetrized a dS/dt pair that
// completes the quantum Hamilton-Jacobi operator equation), or
// p^mu -> -dS/dq^mu (relativistic; time lives inside q^mu).
inline OperatorExpr substitute_momenta(const OperatorExpr& e, const HamiltonianSpec& spec) {
  bool rel = spec.regime == Regime::relativistic;
  std::vector<OpTerm> terms;
  for (OpTerm t : e.terms()) {
    for (auto& f : t.factors) {
      const auto* p = std::get_if<MomentumFactor>(&f);
      if (!p) continue;
      bool spacetime = p->idx.kind == IndexKind::spacetime;
      if (spacetime != rel)
        throw std::invalid_argument("momentum index kind does not match the regime");
      if (rel) t.coeff.value = -t.coeff.value;
      f = SDerivFactor{Dir::q(p->idx)};
    }
    terms.push_back(std::move(t));
  }
  OperatorExpr out{std::move(terms)};
  if (!rel) {
    Coeff chalf = Coeff::rational(Rational(1, 2));
    std::vector<OpTerm> tpair;
    if (spec.a) {
      tpair.push_back(OpTerm{chalf, {FnFactor{*spec.a, {}, {}, 1}, SDerivFactor{Dir::t()}}});
      tpair.push_back(OpTerm{chalf, {SDerivFactor{Dir::t()}, FnFactor{*spec.a, {}, {}, 1}}});
    } else {
      tpair.push_back(OpTerm{Coeff::one(), {SDerivFactor{Dir::t()}}});
    }
    out += OperatorExpr(std::move(tpair));
  }
  return out;
}

}  // namespace qhj::opalg
