#pragma once

#include "qhj/opalg/coeff.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace qhj::opalg {

enum class IndexKind : std::uint8_t { spatial, spacetime };
enum class Variance : std::uint8_t { none, upper, lower };

inline constexpr int kMaxIndexNames = 4;  // i j k l / mu nu rho sigma

struct Index {
  IndexKind kind = IndexKind::spatial;
  std::uint8_t name = 0;
  Variance var = Variance::none;
  auto operator<=>(const Index&) const = default;
};

inline Index spatial(int name) {
  return Index{IndexKind::spatial, static_cast<std::uint8_t>(name), Variance::none};
}
inline Index upper(int name) {
  return Index{IndexKind::spacetime, static_cast<std::uint8_t>(name), Variance::upper};
}
inline Index lower(int name) {
  return Index{IndexKind::spacetime, static_cast<std::uint8_t>(name), Variance::lower};
}

// Derivative direction: a coordinate index, or time.
struct Dir {
  bool time = false;
  Index idx{};
  auto operator<=>(const Dir&) const = default;
  static Dir t() { return Dir{true, {}}; }
  static Dir q(Index ix) { return Dir{false, ix}; }
};

struct SymbolInfo {
  int arity = 0;
  bool constant = false;   // derivatives vanish
  bool symmetric = false;  // two-slot symbol, symmetric in its slots
};

// Known function symbols. Parsing rejects anything else.
inline const std::map<std::string, SymbolInfo>& symbol_table() {
  static const std::map<std::string, SymbolInfo> table = {
      {"a", {0, false, false}},  {"b", {1, false, false}},
      {"c", {0, false, false}},  {"A", {2, true, true}},
      {"S", {0, false, false}},  {"R", {0, false, false}},
      {"V", {0, false, false}},  {"Vv", {1, false, false}},
      {"alpha", {0, false, false}},
      {"QP", {0, false, false}}, {"QK", {0, false, false}},
      {"f", {0, false, false}},  {"g", {0, false, false}},
      {"u", {1, false, false}},  {"w", {0, false, false}},
  };
  return table;
}

inline const SymbolInfo& symbol_info(const std::string& name) {
  auto it = symbol_table().find(name);
  if (it == symbol_table().end())
    throw std::invalid_argument("unknown symbol: " + name);
  return it->second;
}

// Function-of-coordinates factor: name, tensor slots, derivative multiset, power.
struct FnFactor {
  std::string name;
  std::vector<Index> slots;
  std::vector<Dir> derivs;
  int power = 1;
  auto operator<=>(const FnFactor&) const = default;
};

// dS/dq(dir): derivative of the generating operator S-hat. Noncommuting.
struct SDerivFactor {
  Dir dir;
  auto operator<=>(const SDerivFactor&) const = default;
};

// Momentum operator p with one index.
struct MomentumFactor {
  Index idx;
  auto operator<=>(const MomentumFactor&) const = default;
};

using OpFactor = std::variant<FnFactor, SDerivFactor, MomentumFactor>;

struct CTerm {
  Coeff coeff;
  std::vector<FnFactor> factors;
};

struct OpTerm {
  Coeff coeff;
  std::vector<OpFactor> factors;
};

// ---- index usage ----------------------------------------------------------

using IndexCounts = std::array<std::array<int, kMaxIndexNames>, 2>;

inline void count_index(IndexCounts& c, const Index& ix, int mult = 1) {
  c[static_cast<int>(ix.kind)][ix.name] += mult;
}

inline void count_indices(IndexCounts& c, const FnFactor& f) {
  int mult = f.power == 0 ? 0 : (f.power > 0 ? f.power : -f.power);
  for (const auto& s : f.slots) count_index(c, s, mult);
  for (const auto& d : f.derivs)
    if (!d.time) count_index(c, d.idx, mult);
}

inline IndexCounts count_indices(const CTerm& t) {
  IndexCounts c{};
  for (const auto& f : t.factors) count_indices(c, f);
  return c;
}

inline IndexCounts count_indices(const OpTerm& t) {
  IndexCounts c{};
  for (const auto& f : t.factors) {
    if (const auto* fn = std::get_if<FnFactor>(&f)) {
      count_indices(c, *fn);
    } else if (const auto* sd = std::get_if<SDerivFactor>(&f)) {
      if (!sd->dir.time) count_index(c, sd->dir.idx);
    } else {
      count_index(c, std::get<MomentumFactor>(f).idx);
    }
  }
  return c;
}

// Simultaneous renaming (and variance flip) of index names, per kind.
struct IndexMap {
  std::array<std::array<std::int8_t, kMaxIndexNames>, 2> to{};
  std::array<std::array<bool, kMaxIndexNames>, 2> flip{};

  IndexMap() {
    for (auto& k : to) k.fill(-1);
    for (auto& k : flip) k.fill(false);
  }

  void rename(IndexKind kind, int from, int into) {
    to[static_cast<int>(kind)][from] = static_cast<std::int8_t>(into);
  }
  void toggle(IndexKind kind, int name) { flip[static_cast<int>(kind)][name] = true; }

  Index operator()(Index ix) const {
    int k = static_cast<int>(ix.kind);
    if (flip[k][ix.name]) {
      if (ix.var == Variance::upper)
        ix.var = Variance::lower;
      else if (ix.var == Variance::lower)
        ix.var = Variance::upper;
    }
    if (to[k][ix.name] >= 0) ix.name = static_cast<std::uint8_t>(to[k][ix.name]);
    return ix;
  }

  Dir operator()(Dir d) const {
    if (!d.time) d.idx = (*this)(d.idx);
    return d;
  }
};

inline void apply_map(const IndexMap& m, FnFactor& f) {
  for (auto& s : f.slots) s = m(s);
  for (auto& d : f.derivs) d = m(d);
}

inline void apply_map(const IndexMap& m, CTerm& t) {
  for (auto& f : t.factors) apply_map(m, f);
}

inline void apply_map(const IndexMap& m, OpTerm& t) {
  for (auto& f : t.factors) {
    if (auto* fn = std::get_if<FnFactor>(&f))
      apply_map(m, *fn);
    else if (auto* sd = std::get_if<SDerivFactor>(&f))
      sd->dir = m(sd->dir);
    else
      std::get<MomentumFactor>(f).idx = m(std::get<MomentumFactor>(f).idx);
  }
}

// ---- serialization keys (ordering + merge identity) ------------------------

inline void key_index(std::string& out, const Index& ix) {
  out += static_cast<char>('A' + static_cast<int>(ix.kind) * 8 + ix.name);
  out += "nul"[static_cast<int>(ix.var)];
}

inline void key_dir(std::string& out, const Dir& d) {
  if (d.time) {
    out += "t.";
  } else {
    key_index(out, d.idx);
  }
}

inline void key_fn(std::string& out, const FnFactor& f) {
  out += f.name;
  out += '(';
  for (const auto& s : f.slots) key_index(out, s);
  out += ';';
  for (const auto& d : f.derivs) key_dir(out, d);
  out += ")^";
  out += std::to_string(f.power);
}

inline void key_monomial(std::string& out, const Coeff& c) {
  out += '#';
  out += std::to_string(c.i_pow);
  out += ',';
  out += std::to_string(c.hbar);
  out += ',';
  out += std::to_string(c.mass);
  out += ',';
  out += std::to_string(c.rest_mass);
  out += ',';
  out += std::to_string(c.c_light);
}

inline std::string term_key(const CTerm& t) {
  std::string out;
  for (const auto& f : t.factors) {
    key_fn(out, f);
    out += '*';
  }
  key_monomial(out, t.coeff);
  return out;
}

inline std::string term_key(const OpTerm& t) {
  std::string out;
  for (const auto& f : t.factors) {
    if (const auto* fn = std::get_if<FnFactor>(&f)) {
      out += 'F';
      key_fn(out, *fn);
    } else if (const auto* sd = std::get_if<SDerivFactor>(&f)) {
      out += "D";
      key_dir(out, sd->dir);
    } else {
      out += 'P';
      key_index(out, std::get<MomentumFactor>(f).idx);
    }
    out += '*';
  }
  key_monomial(out, t.coeff);
  return out;
}

// ---- canonical form of a single term ---------------------------------------

inline void sort_factor_internals(FnFactor& f) {
  std::sort(f.derivs.begin(), f.derivs.end());
  if (f.slots.size() == 2 && symbol_table().count(f.name) &&
      symbol_info(f.name).symmetric) {
    std::sort(f.slots.begin(), f.slots.end());
  }
}

inline void sort_factor_internals(CTerm& t) {
  for (auto& f : t.factors) sort_factor_internals(f);
}

inline void sort_factor_internals(OpTerm& t) {
  for (auto& f : t.factors)
    if (auto* fn = std::get_if<FnFactor>(&f)) sort_factor_internals(*fn);
}

inline bool same_base(const FnFactor& a, const FnFactor& b) {
  return a.name == b.name && a.slots == b.slots && a.derivs == b.derivs;
}

// Merge equal bases into powers; input need not be sorted, output keeps order
// of first appearance of each base after an initial sort by the caller.
inline void merge_adjacent_powers(std::vector<FnFactor>& fs) {
  std::vector<FnFactor> out;
  for (auto& f : fs) {
    if (!out.empty() && same_base(out.back(), f)) {
      out.back().power += f.power;
      if (out.back().power == 0) out.pop_back();
    } else {
      out.push_back(std::move(f));
    }
  }
  fs = std::move(out);
}

inline void order_factors(CTerm& t) {
  std::sort(t.factors.begin(), t.factors.end());
  merge_adjacent_powers(t.factors);
}

// Functions of coordinates commute with each other; momenta commute with each
// other. Consecutive runs of either kind get a deterministic order. SDeriv
// factors are never reordered here.
inline void order_factors(OpTerm& t) {
  auto& fs = t.factors;
  std::size_t i = 0;
  while (i < fs.size()) {
    std::size_t j = i;
    if (std::holds_alternative<FnFactor>(fs[i])) {
      while (j < fs.size() && std::holds_alternative<FnFactor>(fs[j])) ++j;
      std::sort(fs.begin() + i, fs.begin() + j,
                [](const OpFactor& x, const OpFactor& y) {
                  return std::get<FnFactor>(x) < std::get<FnFactor>(y);
                });
    } else if (std::holds_alternative<MomentumFactor>(fs[i])) {
      while (j < fs.size() && std::holds_alternative<MomentumFactor>(fs[j])) ++j;
      std::sort(fs.begin() + i, fs.begin() + j,
                [](const OpFactor& x, const OpFactor& y) {
                  return std::get<MomentumFactor>(x) < std::get<MomentumFactor>(y);
                });
    } else {
      ++j;
    }
    i = std::max(j, i + 1);
  }
  // merge adjacent equal function bases into powers
  std::vector<OpFactor> out;
  for (auto& f : fs) {
    auto* fn = std::get_if<FnFactor>(&f);
    auto* last = out.empty() ? nullptr : std::get_if<FnFactor>(&out.back());
    if (fn && last && same_base(*last, *fn)) {
      last->power += fn->power;
      if (last->power == 0) out.pop_back();
    } else {
      out.push_back(std::move(f));
    }
  }
  fs = std::move(out);
}

namespace detail {

// All injective assignments of `dummies` into `pool`, as vectors of targets.
inline void k_permutations(const std::vector<int>& pool, std::size_t k,
                           std::vector<int>& cur, std::vector<bool>& used,
                           std::vector<std::vector<int>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t p = 0; p < pool.size(); ++p) {
    if (used[p]) continue;
    used[p] = true;
    cur.push_back(pool[p]);
    k_permutations(pool, k, cur, used, out);
    cur.pop_back();
    used[p] = false;
  }
}

inline std::vector<std::vector<int>> assignments(const std::vector<int>& pool,
                                                 std::size_t k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::vector<bool> used(pool.size(), false);
  k_permutations(pool, k, cur, used, out);
  return out;
}

}  // namespace detail

// Canonical representative of a term under renaming of summed (repeated)
// indices and, for spacetime pairs, the variance flip A^mu B_mu = A_mu B^mu.
// Brute-force lexicographic minimum; index budgets are tiny.
template <typename TermT>
TermT canonical_term(TermT t) {
  sort_factor_internals(t);
  IndexCounts counts = count_indices(t);

  std::array<std::vector<int>, 2> dummies;
  std::array<std::vector<int>, 2> pool;
  for (int k = 0; k < 2; ++k) {
    for (int n = 0; n < kMaxIndexNames; ++n) {
      if (counts[k][n] >= 2) dummies[k].push_back(n);
      if (counts[k][n] != 1) pool[k].push_back(n);
    }
  }

  auto spatial_maps = detail::assignments(pool[0], dummies[0].size());
  auto spacetime_maps = detail::assignments(pool[1], dummies[1].size());

  std::optional<TermT> best;
  std::string best_key;
  for (const auto& sm : spatial_maps) {
    for (const auto& tm : spacetime_maps) {
      unsigned flip_limit = 1u << dummies[1].size();
      for (unsigned flips = 0; flips < flip_limit; ++flips) {
        IndexMap m;
        for (std::size_t d = 0; d < dummies[0].size(); ++d)
          m.rename(IndexKind::spatial, dummies[0][d], sm[d]);
        for (std::size_t d = 0; d < dummies[1].size(); ++d) {
          m.rename(IndexKind::spacetime, dummies[1][d], tm[d]);
          if (flips & (1u << d)) m.toggle(IndexKind::spacetime, dummies[1][d]);
        }
        TermT cand = t;
        apply_map(m, cand);
        sort_factor_internals(cand);
        order_factors(cand);
        std::string key = term_key(cand);
        if (!best || key < best_key) {
          best = std::move(cand);
          best_key = std::move(key);
        }
      }
    }
  }
  return *best;
}

// ---- expressions ------------------------------------------------------------

namespace detail {

template <typename TermT>
void canonicalize_terms(std::vector<TermT>& terms) {
  std::map<std::string, TermT> merged;
  for (auto& t : terms) {
    if (t.coeff.is_zero()) continue;
    TermT c = canonical_term(std::move(t));
    if (c.coeff.is_zero()) continue;
    std::string key = term_key(c);
    auto it = merged.find(key);
    if (it == merged.end()) {
      merged.emplace(std::move(key), std::move(c));
    } else {
      it->second.coeff.value += c.coeff.value;
    }
  }
  terms.clear();
  for (auto& [k, t] : merged)
    if (!t.coeff.is_zero()) terms.push_back(std::move(t));
}

}  // namespace detail

class CNumberExpr {
 public:
  CNumberExpr() = default;
  explicit CNumberExpr(CTerm t) : terms_{std::move(t)} { canon(); }
  explicit CNumberExpr(std::vector<CTerm> ts) : terms_(std::move(ts)) { canon(); }

  static CNumberExpr constant(Coeff c) { return CNumberExpr(CTerm{c, {}}); }
  static CNumberExpr one() { return constant(Coeff::one()); }

  const std::vector<CTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  friend bool operator==(const CNumberExpr& a, const CNumberExpr& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
      if (!(a.terms_[i].coeff == b.terms_[i].coeff)) return false;
      if (term_key(a.terms_[i]) != term_key(b.terms_[i])) return false;
    }
    return true;
  }

  CNumberExpr& operator+=(const CNumberExpr& o) {
    terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
    canon();
    return *this;
  }
  CNumberExpr& operator-=(const CNumberExpr& o) {
    for (auto t : o.terms_) {
      t.coeff.value = -t.coeff.value;
      terms_.push_back(std::move(t));
    }
    canon();
    return *this;
  }
  friend CNumberExpr operator+(CNumberExpr a, const CNumberExpr& b) { return a += b; }
  friend CNumberExpr operator-(CNumberExpr a, const CNumberExpr& b) { return a -= b; }

  friend CNumberExpr operator*(const Coeff& c, CNumberExpr e) {
    for (auto& t : e.terms_) t.coeff *= c;
    e.canon();
    return e;
  }

 private:
  void canon() { detail::canonicalize_terms(terms_); }
  std::vector<CTerm> terms_;
};

class OperatorExpr {
 public:
  OperatorExpr() = default;
  explicit OperatorExpr(OpTerm t) : terms_{std::move(t)} { canon(); }
  explicit OperatorExpr(std::vector<OpTerm> ts) : terms_(std::move(ts)) { canon(); }

  static OperatorExpr constant(Coeff c) { return OperatorExpr(OpTerm{c, {}}); }

  const std::vector<OpTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  friend bool operator==(const OperatorExpr& a, const OperatorExpr& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
      if (!(a.terms_[i].coeff == b.terms_[i].coeff)) return false;
      if (term_key(a.terms_[i]) != term_key(b.terms_[i])) return false;
    }
    return true;
  }

  OperatorExpr& operator+=(const OperatorExpr& o) {
    terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
    canon();
    return *this;
  }
  OperatorExpr& operator-=(const OperatorExpr& o) {
    for (auto t : o.terms_) {
      t.coeff.value = -t.coeff.value;
      terms_.push_back(std::move(t));
    }
    canon();
    return *this;
  }
  friend OperatorExpr operator+(OperatorExpr a, const OperatorExpr& b) { return a += b; }
  friend OperatorExpr operator-(OperatorExpr a, const OperatorExpr& b) { return a -= b; }

  friend OperatorExpr operator*(const Coeff& c, OperatorExpr e) {
    for (auto& t : e.terms_) t.coeff *= c;
    e.canon();
    return e;
  }

 private:
  void canon() { detail::canonicalize_terms(terms_); }
  std::vector<OpTerm> terms_;
};

// ---- rename-apart product ---------------------------------------------------

namespace detail {

// Reassign every summed index of `t` to a fresh name, avoiding `avoid`.
// Updates `avoid` with the names chosen. Free indices are untouched.
template <typename TermT>
void rename_dummies_apart(TermT& t, IndexCounts& avoid) {
  IndexCounts counts = count_indices(t);
  IndexMap m;
  bool any = false;
  for (int k = 0; k < 2; ++k) {
    for (int n = 0; n < kMaxIndexNames; ++n) {
      if (counts[k][n] < 2) continue;
      int fresh = -1;
      for (int cand = 0; cand < kMaxIndexNames; ++cand) {
        if (avoid[k][cand] == 0 && (cand == n || counts[k][cand] == 0)) {
          // target must be unused in t (or be the name itself) and unused outside
          fresh = cand;
          break;
        }
      }
      if (fresh < 0)
        throw std::runtime_error("index namespace exhausted while renaming");
      m.rename(static_cast<IndexKind>(k), n, fresh);
      avoid[k][fresh] += 2;
      counts[k][fresh] = (fresh == n) ? counts[k][n] : -1;  // reserve
      any = true;
    }
  }
  if (any) apply_map(m, t);
}

}  // namespace detail

// Product of two c-number terms with capture-avoiding renaming of summed
// indices. Free indices pass through (deliberate contraction stays possible).
inline CTerm mul_terms(const CTerm& a, const CTerm& b) {
  CTerm a2 = a, b2 = b;
  IndexCounts ca = count_indices(a2), cb = count_indices(b2);
  IndexCounts avoid{};
  for (int k = 0; k < 2; ++k)
    for (int n = 0; n < kMaxIndexNames; ++n) {
      // free names on either side are pinned
      if (ca[k][n] == 1 || cb[k][n] == 1) avoid[k][n] += 1;
    }
  detail::rename_dummies_apart(a2, avoid);
  detail::rename_dummies_apart(b2, avoid);
  CTerm out;
  out.coeff = a2.coeff * b2.coeff;
  out.factors = std::move(a2.factors);
  out.factors.insert(out.factors.end(), b2.factors.begin(), b2.factors.end());
  return out;
}

inline CNumberExpr operator*(const CNumberExpr& a, const CNumberExpr& b) {
  std::vector<CTerm> out;
  out.reserve(a.terms().size() * b.terms().size());
  for (const auto& ta : a.terms())
    for (const auto& tb : b.terms()) out.push_back(mul_terms(ta, tb));
  return CNumberExpr(std::move(out));
}

inline OpTerm mul_terms(const OpTerm& a, const OpTerm& b) {
  OpTerm a2 = a, b2 = b;
  IndexCounts ca = count_indices(a2), cb = count_indices(b2);
  IndexCounts avoid{};
  for (int k = 0; k < 2; ++k)
    for (int n = 0; n < kMaxIndexNames; ++n)
      if (ca[k][n] == 1 || cb[k][n] == 1) avoid[k][n] += 1;
  detail::rename_dummies_apart(a2, avoid);
  detail::rename_dummies_apart(b2, avoid);
  OpTerm out;
  out.coeff = a2.coeff * b2.coeff;
  out.factors = std::move(a2.factors);
  out.factors.insert(out.factors.end(), b2.factors.begin(), b2.factors.end());
  return out;
}

inline OperatorExpr operator*(const OperatorExpr& a, const OperatorExpr& b) {
  std::vector<OpTerm> out;
  out.reserve(a.terms().size() * b.terms().size());
  for (const auto& ta : a.terms())
    for (const auto& tb : b.terms()) out.push_back(mul_terms(ta, tb));
  return OperatorExpr(std::move(out));
}

// Inverse of a one-term product with no contracted indices.
inline CNumberExpr invert_monomial(const CNumberExpr& e) {
  if (e.terms().size() != 1)
    throw std::invalid_argument("inversion requires a single-term monomial");
  CTerm t = e.terms()[0];
  IndexCounts counts = count_indices(t);
  for (int k = 0; k < 2; ++k)
    for (int n = 0; n < kMaxIndexNames; ++n)
      if (counts[k][n] >= 2)
        throw std::invalid_argument("cannot invert a contracted product");
  t.coeff = t.coeff.inverse();
  for (auto& f : t.factors) f.power = -f.power;
  return CNumberExpr(std::move(t));
}

inline CNumberExpr pow_expr(const CNumberExpr& e, int n) {
  if (n == 0) return CNumberExpr::one();
  CNumberExpr base = n > 0 ? e : invert_monomial(e);
  CNumberExpr acc = base;
  for (int k = 1; k < (n > 0 ? n : -n); ++k) acc = acc * base;
  return acc;
}

// Lift / demote between the two expression kinds.
inline OperatorExpr to_operator(const CNumberExpr& e) {
  std::vector<OpTerm> ts;
  for (const auto& t : e.terms()) {
    OpTerm o;
    o.coeff = t.coeff;
    for (const auto& f : t.factors) o.factors.emplace_back(f);
    ts.push_back(std::move(o));
  }
  return OperatorExpr(std::move(ts));
}

inline CNumberExpr to_cnumber(const OperatorExpr& e) {
  std::vector<CTerm> ts;
  for (const auto& t : e.terms()) {
    CTerm c;
    c.coeff = t.coeff;
    for (const auto& f : t.factors) {
      const auto* fn = std::get_if<FnFactor>(&f);
      if (!fn)
        throw std::invalid_argument(
            "operator factor where a c-number expression was expected");
      c.factors.push_back(*fn);
    }
    ts.push_back(std::move(c));
  }
  return CNumberExpr(std::move(ts));
}

}  // namespace qhj::opalg
