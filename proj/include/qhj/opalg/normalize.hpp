#pragma once

#include "qhj/opalg/expr.hpp"

#include <cstddef>
#include <vector>

namespace qhj::opalg {

struct NormalizeOptions {
  // Demote the right factor of an adjacent dS(x)*dS(y) pair to a function of
  // coordinates: dS(x)*dS(y) -> S_y * dS(x) - i hbar S_xy. Off by default;
  // projection handles pairs directly.
  bool treat_s_deriv_as_function = false;
};

// Push derivative-like factors (dS/dq, dS/dt, p) to the right of coordinate
// functions with the canonical commutator: D*F -> F*D - i hbar dF/d(dir).
// Leftmost redex first, to fixpoint. Constant symbols commute exactly.
inline OperatorExpr normalize(const OperatorExpr& e, NormalizeOptions opts = {}) {
  std::vector<OpTerm> done;
  std::vector<OpTerm> queue = e.terms();
  while (!queue.empty()) {
    OpTerm t = std::move(queue.back());
    queue.pop_back();

    std::size_t pos = t.factors.size();
    bool pair_redex = false;
    for (std::size_t i = 0; i + 1 < t.factors.size(); ++i) {
      bool left_deriv = std::holds_alternative<SDerivFactor>(t.factors[i]) ||
                        std::holds_alternative<MomentumFactor>(t.factors[i]);
      if (!left_deriv) continue;
      if (std::holds_alternative<FnFactor>(t.factors[i + 1])) {
        pos = i;
        break;
      }
      if (opts.treat_s_deriv_as_function &&
          std::holds_alternative<SDerivFactor>(t.factors[i]) &&
          std::holds_alternative<SDerivFactor>(t.factors[i + 1])) {
        pos = i;
        pair_redex = true;
        break;
      }
    }
    if (pos == t.factors.size()) {
      done.push_back(std::move(t));
      continue;
    }

    if (pair_redex) {
      Dir x = std::get<SDerivFactor>(t.factors[pos]).dir;
      Dir y = std::get<SDerivFactor>(t.factors[pos + 1]).dir;

      OpTerm swapped = t;
      swapped.factors[pos] = FnFactor{"S", {}, {y}, 1};
      swapped.factors[pos + 1] = SDerivFactor{x};
      queue.push_back(std::move(swapped));

      OpTerm comm = t;
      FnFactor mixed{"S", {}, {x, y}, 1};
      sort_factor_internals(mixed);
      comm.factors.erase(comm.factors.begin() + pos, comm.factors.begin() + pos + 2);
      comm.factors.insert(comm.factors.begin() + pos, mixed);
      comm.coeff *= Coeff{Rational(-1), 1, 1, 0, 0, 0};
      queue.push_back(std::move(comm));
      continue;
    }

    Dir dir = std::holds_alternative<SDerivFactor>(t.factors[pos])
                  ? std::get<SDerivFactor>(t.factors[pos]).dir
                  : Dir::q(std::get<MomentumFactor>(t.factors[pos]).idx);
    FnFactor F = std::get<FnFactor>(t.factors[pos + 1]);

    OpTerm swapped = t;
    std::swap(swapped.factors[pos], swapped.factors[pos + 1]);
    queue.push_back(std::move(swapped));

    if (!symbol_info(F.name).constant) {
      OpTerm comm = t;
      comm.factors.erase(comm.factors.begin() + pos, comm.factors.begin() + pos + 2);
      FnFactor deriv{F.name, F.slots, F.derivs, 1};
      deriv.derivs.push_back(dir);
      sort_factor_internals(deriv);
      comm.factors.insert(comm.factors.begin() + pos, std::move(deriv));
      if (F.power != 1) {
        FnFactor lowered = F;
        lowered.power -= 1;
        comm.factors.insert(comm.factors.begin() + pos, std::move(lowered));
      }
      comm.coeff *= Coeff{Rational(-F.power), 1, 1, 0, 0, 0};
      queue.push_back(std::move(comm));
    }
  }
  return OperatorExpr(std::move(done));
}

}  // namespace qhj::opalg
