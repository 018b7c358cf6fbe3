#pragma once

#include "qhj/opalg/expr.hpp"

#include <string>

namespace qhj::opalg {

inline std::string index_name(const Index& ix) {
  static constexpr const char* spacetime_names[4] = {"mu", "nu", "rho", "sigma"};
  if (ix.kind == IndexKind::spatial) return std::string(1, "ijkl"[ix.name]);
  return spacetime_names[ix.name];
}

inline std::string slots_suffix(const std::vector<Index>& slots) {
  std::string out;
  char prev = 0;
  for (const auto& s : slots) {
    char marker = (s.var == Variance::upper) ? '^' : '_';
    if (marker != prev) {
      out += marker;
      prev = marker;
    }
    out += index_name(s);
  }
  return out;
}

inline std::string dir_suffix(const Dir& d) {
  if (d.time) return "/dt";
  std::string out = "/dq";
  out += (d.idx.var == Variance::upper) ? '^' : '_';
  out += index_name(d.idx);
  return out;
}

inline std::string to_string(const FnFactor& f) {
  std::string base = f.name + slots_suffix(f.slots);
  std::string body;
  if (f.derivs.empty()) {
    body = base;
  } else {
    body = "d[" + base + "]";
    for (const auto& d : f.derivs) body += dir_suffix(d);
  }
  if (f.power == 1) return body;
  if (f.derivs.empty()) return body + "^" + std::to_string(f.power);
  return "(" + body + ")^" + std::to_string(f.power);
}

inline std::string to_string(const SDerivFactor& f) { return "dS" + dir_suffix(f.dir); }

inline std::string to_string(const MomentumFactor& f) {
  std::string out = "p";
  out += (f.idx.var == Variance::upper) ? '^' : '_';
  out += index_name(f.idx);
  return out;
}

namespace detail {

inline void append_exponent(std::vector<std::string>& parts, const char* name, int n) {
  if (n == 0) return;
  std::string tok = name;
  if (n != 1) tok += "^" + std::to_string(n);
  parts.push_back(std::move(tok));
}

// Magnitude of the coefficient as "*"-joined tokens; sign handled by caller.
inline std::vector<std::string> coeff_tokens(const Coeff& c) {
  std::vector<std::string> parts;
  Rational v = c.value >= Rational(0) ? c.value : -c.value;
  if (v != Rational(1)) {
    std::string tok = std::to_string(v.numerator());
    if (v.denominator() != 1) tok += "/" + std::to_string(v.denominator());
    parts.push_back(std::move(tok));
  }
  if (c.i_pow) parts.push_back("i");
  append_exponent(parts, "hbar", c.hbar);
  append_exponent(parts, "m", c.mass);
  append_exponent(parts, "m0", c.rest_mass);
  append_exponent(parts, "c_light", c.c_light);
  return parts;
}

template <typename TermT, typename FactorToString>
std::string term_to_string(const TermT& t, FactorToString&& fts) {
  auto parts = coeff_tokens(t.coeff);
  for (const auto& f : t.factors) parts.push_back(fts(f));
  if (parts.empty()) return "1";
  std::string out = parts[0];
  for (std::size_t k = 1; k < parts.size(); ++k) out += "*" + parts[k];
  return out;
}

template <typename ExprT, typename FactorToString>
std::string expr_to_string(const ExprT& e, FactorToString&& fts) {
  if (e.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : e.terms()) {
    bool neg = t.coeff.value < Rational(0);
    if (first) {
      if (neg) out += "-";
      first = false;
    } else {
      out += neg ? " - " : " + ";
    }
    out += term_to_string(t, fts);
  }
  return out;
}

}  // namespace detail

inline std::string to_string(const CNumberExpr& e) {
  return detail::expr_to_string(e, [](const FnFactor& f) { return to_string(f); });
}

inline std::string to_string(const OperatorExpr& e) {
  return detail::expr_to_string(e, [](const OpFactor& f) {
    return std::visit([](const auto& g) { return to_string(g); }, f);
  });
}

}  // namespace qhj::opalg
