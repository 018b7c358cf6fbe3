#pragma once

#include "qhj/opalg/expr.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qhj::opalg {

// Formal partial derivative. Summed indices of a term are renamed away from a
// coordinate-index direction first, so d/dq_i of a term already contracted
// over i cannot capture.
inline CNumberExpr derivative(const CNumberExpr& e, Dir dir) {
  std::vector<CTerm> out;
  for (CTerm t : e.terms()) {
    if (!dir.time) {
      int k = static_cast<int>(dir.idx.kind);
      IndexCounts counts = count_indices(t);
      if (counts[k][dir.idx.name] >= 2) {
        IndexCounts avoid{};
        avoid[k][dir.idx.name] += 1;
        detail::rename_dummies_apart(t, avoid);
      }
    }
    for (std::size_t i = 0; i < t.factors.size(); ++i) {
      const FnFactor& f = t.factors[i];
      if (symbol_info(f.name).constant) continue;
      CTerm nt;
      nt.coeff = t.coeff * Coeff::rational(Rational(f.power));
      for (std::size_t j = 0; j < t.factors.size(); ++j) {
        if (j == i) continue;
        nt.factors.push_back(t.factors[j]);
      }
      if (f.power != 1) {
        FnFactor lowered = f;
        lowered.power -= 1;
        nt.factors.push_back(std::move(lowered));
      }
      FnFactor deriv{f.name, f.slots, f.derivs, 1};
      deriv.derivs.push_back(dir);
      sort_factor_internals(deriv);
      nt.factors.push_back(std::move(deriv));
      out.push_back(std::move(nt));
    }
  }
  return CNumberExpr(std::move(out));
}

// ---- function substitution --------------------------------------------------

struct FunctionBinding {
  std::vector<Index> params;  // placeholder indices, one per tensor slot
  CNumberExpr value;
};

using Bindings = std::map<std::string, FunctionBinding>;

namespace detail {

inline CNumberExpr rename_params(const CNumberExpr& e,
                                 const std::vector<Index>& params,
                                 const std::vector<Index>& slots) {
  std::vector<CTerm> out;
  for (CTerm t : e.terms()) {
    IndexCounts avoid{};
    for (const auto& s : slots) avoid[static_cast<int>(s.kind)][s.name] += 1;
    for (const auto& p : params) avoid[static_cast<int>(p.kind)][p.name] += 1;
    rename_dummies_apart(t, avoid);
    IndexMap m;
    for (std::size_t k = 0; k < params.size(); ++k) {
      if (params[k].kind != slots[k].kind)
        throw std::invalid_argument("binding parameter kind mismatch");
      m.rename(params[k].kind, params[k].name, slots[k].name);
      if (params[k].var != slots[k].var) m.toggle(params[k].kind, params[k].name);
    }
    apply_map(m, t);
    out.push_back(std::move(t));
  }
  return CNumberExpr(std::move(out));
}

}  // namespace detail

// Replace bound function symbols by expressions. Derivatives chain through the
// replacement; negative powers require the substituted (and differentiated)
// value to be an invertible monomial.
inline CNumberExpr substitute_functions(const CNumberExpr& e, const Bindings& bind) {
  CNumberExpr result;
  for (const CTerm& t : e.terms()) {
    CTerm rest;
    rest.coeff = t.coeff;
    std::vector<FnFactor> bound;
    for (const auto& f : t.factors) {
      if (bind.count(f.name))
        bound.push_back(f);
      else
        rest.factors.push_back(f);
    }
    CNumberExpr acc{std::move(rest)};
    for (const auto& f : bound) {
      const FunctionBinding& B = bind.at(f.name);
      if (B.params.size() != f.slots.size())
        throw std::invalid_argument("binding arity mismatch for " + f.name);
      CNumberExpr value =
          B.params.empty() ? B.value : detail::rename_params(B.value, B.params, f.slots);
      for (const auto& d : f.derivs) value = derivative(value, d);
      value = pow_expr(value, f.power);
      acc = acc * value;
    }
    result += acc;
  }
  return result;
}

// A := identity: remove the metric factor and identify its two slot indices.
inline CNumberExpr substitute_identity_metric(const CNumberExpr& e,
                                              const std::string& name = "A") {
  std::vector<CTerm> out;
  for (CTerm t : e.terms()) {
    for (;;) {
      auto it = t.factors.begin();
      for (; it != t.factors.end(); ++it)
        if (it->name == name) break;
      if (it == t.factors.end()) break;
      if (it->power != 1 || it->slots.size() != 2 || !it->derivs.empty())
        throw std::invalid_argument("identity substitution needs a bare two-slot factor");
      Index x = it->slots[0], y = it->slots[1];
      if (x.kind != y.kind || x.name == y.name)
        throw std::invalid_argument("identity substitution with repeated slot index");
      t.factors.erase(it);
      IndexMap m;
      m.rename(y.kind, y.name, x.name);
      apply_map(m, t);
    }
    out.push_back(std::move(t));
  }
  return CNumberExpr(std::move(out));
}

// Impose a divergence-free constraint: any term containing the symbol with one
// of its own slots contracted against one of its own derivative directions
// (d[b_i]/dq_i and higher derivatives of it) is dropped.
inline CNumberExpr drop_divergence_terms(const CNumberExpr& e, const std::string& name) {
  std::vector<CTerm> out;
  for (const CTerm& t : e.terms()) {
    bool dead = false;
    for (const auto& f : t.factors) {
      if (f.name != name) continue;
      for (const auto& s : f.slots)
        for (const auto& d : f.derivs)
          if (!d.time && d.idx.kind == s.kind && d.idx.name == s.name) dead = true;
    }
    if (!dead) out.push_back(t);
  }
  return CNumberExpr(std::move(out));
}

// Rewrite every generic-mass monomial m^n into the rest mass m0^n.
inline CNumberExpr identify_mass_with_rest_mass(const CNumberExpr& e) {
  std::vector<CTerm> out;
  for (CTerm t : e.terms()) {
    t.coeff.rest_mass += t.coeff.mass;
    t.coeff.mass = 0;
    out.push_back(std::move(t));
  }
  return CNumberExpr(std::move(out));
}

// e == first + i*second, both with real coefficients.
inline std::pair<CNumberExpr, CNumberExpr> split_real_imag(const CNumberExpr& e) {
  std::vector<CTerm> re, im;
  for (CTerm t : e.terms()) {
    if (t.coeff.i_pow == 0) {
      re.push_back(std::move(t));
    } else {
      t.coeff.i_pow = 0;
      im.push_back(std::move(t));
    }
  }
  return {CNumberExpr(std::move(re)), CNumberExpr(std::move(im))};
}

// Solve eq == 0 for a scalar symbol that appears undifferentiated, to first
// power, with a monomial coefficient.
inline CNumberExpr solve_linear(const CNumberExpr& eq, const std::string& name) {
  std::vector<CTerm> carrying, rest;
  for (CTerm t : eq.terms()) {
    int hits = 0;
    for (const auto& f : t.factors)
      if (f.name == name) ++hits;
    if (hits == 0) {
      rest.push_back(std::move(t));
      continue;
    }
    if (hits > 1) throw std::invalid_argument(name + " appears nonlinearly");
    auto it = t.factors.begin();
    while (it->name != name) ++it;
    if (it->power != 1 || !it->derivs.empty() || !it->slots.empty())
      throw std::invalid_argument(name + " appears differentiated or powered");
    t.factors.erase(it);
    carrying.push_back(std::move(t));
  }
  if (carrying.empty()) throw std::invalid_argument(name + " does not appear");
  CNumberExpr k{std::move(carrying)};
  CNumberExpr b{std::move(rest)};
  return Coeff::rational(Rational(-1)) * (b * invert_monomial(k));
}

inline bool expr_equal(const CNumberExpr& a, const CNumberExpr& b) { return a == b; }
inline bool expr_equal(const OperatorExpr& a, const OperatorExpr& b) { return a == b; }

}  // namespace qhj::opalg
