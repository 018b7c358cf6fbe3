#pragma once

#include "qhj/opalg/expr.hpp"

#include <stdexcept>
#include <vector>

namespace qhj::opalg {

struct MoreThanTwoSDerivs : std::runtime_error {
  MoreThanTwoSDerivs()
      : std::runtime_error(
            "matrix-element projection is undefined for three or more dS factors "
            "in one term") {}
};

// <q,t| . |Q,t> / <q,t|Q,t>: coordinate functions project to themselves,
// a single dS(x) to the c-number derivative S_x, and an ordered pair
// dS(x) dS(y) to S_x S_y - i hbar S_xy. Terms must be normal ordered
// (functions left of derivatives) and free of momentum factors.
inline CNumberExpr project_matrix_element(const OperatorExpr& e) {
  std::vector<CTerm> out;
  for (const OpTerm& t : e.terms()) {
    CTerm base;
    base.coeff = t.coeff;
    std::vector<Dir> dirs;
    for (const auto& f : t.factors) {
      if (const auto* fn = std::get_if<FnFactor>(&f)) {
        if (!dirs.empty())
          throw std::invalid_argument(
              "projection requires normal order: coordinate function found to "
              "the right of a dS factor");
        base.factors.push_back(*fn);
      } else if (const auto* sd = std::get_if<SDerivFactor>(&f)) {
        dirs.push_back(sd->dir);
        if (dirs.size() > 2) throw MoreThanTwoSDerivs();
      } else {
        throw std::invalid_argument("substitute momenta before projecting");
      }
    }
    if (dirs.empty()) {
      out.push_back(std::move(base));
    } else if (dirs.size() == 1) {
      base.factors.push_back(FnFactor{"S", {}, {dirs[0]}, 1});
      out.push_back(std::move(base));
    } else {
      CTerm product = base;
      product.factors.push_back(FnFactor{"S", {}, {dirs[0]}, 1});
      product.factors.push_back(FnFactor{"S", {}, {dirs[1]}, 1});
      out.push_back(std::move(product));

      CTerm mixed = base;
      mixed.coeff *= Coeff{Rational(-1), 1, 1, 0, 0, 0};
      FnFactor second{"S", {}, {dirs[0], dirs[1]}, 1};
      sort_factor_internals(second);
      mixed.factors.push_back(std::move(second));
      out.push_back(std::move(mixed));
    }
  }
  return CNumberExpr(std::move(out));
}

}  // namespace qhj::opalg
