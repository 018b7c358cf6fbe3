#pragma once

#include "qhj/opalg/calculus.hpp"
#include "qhj/opalg/expr.hpp"

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace qhj::opalg {

struct ParseError : std::runtime_error {
  std::size_t pos;
  ParseError(const std::string& msg, std::size_t p)
      : std::runtime_error(msg + " (offset " + std::to_string(p) + ")"), pos(p) {}
};

namespace detail {

struct Token {
  enum Kind {
    number, ident, plus, minus, star, slash, caret,
    lparen, rparen, lbracket, rbracket, comma, end
  };
  Kind kind;
  std::string text;
  long long value = 0;
  std::size_t pos = 0;
};

inline std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto push = [&](Token::Kind k, std::size_t pos) { out.push_back({k, {}, 0, pos}); };
  while (i < src.size()) {
    char ch = src[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::size_t start = i;
      long long v = 0;
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
        v = v * 10 + (src[i] - '0');
        ++i;
      }
      if (i < src.size() && src[i] == '.')
        throw ParseError("floating point literals are not allowed", i);
      out.push_back({Token::number, {}, v, start});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(ch))) {
      std::size_t start = i;
      while (i < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_'))
        ++i;
      out.push_back({Token::ident, std::string(src.substr(start, i - start)), 0, start});
      continue;
    }
    switch (ch) {
      case '+': push(Token::plus, i); break;
      case '-': push(Token::minus, i); break;
      case '*': push(Token::star, i); break;
      case '/': push(Token::slash, i); break;
      case '^': push(Token::caret, i); break;
      case '(': push(Token::lparen, i); break;
      case ')': push(Token::rparen, i); break;
      case '[': push(Token::lbracket, i); break;
      case ']': push(Token::rbracket, i); break;
      case ',': push(Token::comma, i); break;
      default:
        throw ParseError(std::string("unexpected character '") + ch + "'", i);
    }
    ++i;
  }
  out.push_back({Token::end, {}, 0, src.size()});
  return out;
}

// Index names and markers, e.g. "_ij", "^mu", "_i^mu". Spatial indices carry no
// variance and reject the '^' marker.
inline std::vector<Index> parse_decorated_indices(const std::string& s, std::size_t pos) {
  struct Name {
    const char* text;
    IndexKind kind;
    int name;
  };
  static constexpr Name names[] = {
      {"sigma", IndexKind::spacetime, 3}, {"rho", IndexKind::spacetime, 2},
      {"mu", IndexKind::spacetime, 0},    {"nu", IndexKind::spacetime, 1},
      {"i", IndexKind::spatial, 0},       {"j", IndexKind::spatial, 1},
      {"k", IndexKind::spatial, 2},       {"l", IndexKind::spatial, 3},
  };
  std::vector<Index> out;
  Variance cur = Variance::lower;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '_') {
      cur = Variance::lower;
      ++i;
      continue;
    }
    if (s[i] == '^') {
      cur = Variance::upper;
      ++i;
      continue;
    }
    bool matched = false;
    for (const auto& n : names) {
      std::string_view t = n.text;
      if (std::string_view(s).substr(i, t.size()) == t) {
        if (n.kind == IndexKind::spatial) {
          if (cur == Variance::upper)
            throw ParseError("spatial indices are written with '_'", pos);
          out.push_back(Index{n.kind, static_cast<std::uint8_t>(n.name), Variance::none});
        } else {
          out.push_back(Index{n.kind, static_cast<std::uint8_t>(n.name), cur});
        }
        i += t.size();
        matched = true;
        break;
      }
    }
    if (!matched) throw ParseError("unknown index name in '" + s + "'", pos);
  }
  return out;
}

inline bool starts_with_index_name(const std::string& s) {
  for (const char* n : {"sigma", "rho", "mu", "nu", "i", "j", "k", "l"})
    if (s.rfind(n, 0) == 0) return true;
  return false;
}

class Parser {
 public:
  Parser(std::string_view src, bool allow_operators)
      : toks_(lex(src)), allow_ops_(allow_operators) {}

  OperatorExpr parse() {
    OperatorExpr e = parse_expression();
    expect(Token::end, "trailing input");
    return e;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t k = k_ + ahead;
    return k < toks_.size() ? toks_[k] : toks_.back();
  }
  const Token& next() { return toks_[k_ < toks_.size() - 1 ? k_++ : k_]; }
  bool accept(Token::Kind k) {
    if (peek().kind != k) return false;
    next();
    return true;
  }
  void expect(Token::Kind k, const char* what) {
    if (!accept(k)) throw ParseError(std::string("expected ") + what, peek().pos);
  }

  OperatorExpr parse_expression() {
    bool neg = false;
    if (accept(Token::minus))
      neg = true;
    else
      accept(Token::plus);
    OperatorExpr e = parse_term();
    if (neg) e = Coeff::rational(Rational(-1)) * e;
    for (;;) {
      if (accept(Token::plus))
        e += parse_term();
      else if (accept(Token::minus))
        e -= parse_term();
      else
        return e;
    }
  }

  OperatorExpr parse_term() {
    OperatorExpr e = parse_factor();
    for (;;) {
      if (accept(Token::star)) {
        e = e * parse_factor();
      } else if (peek().kind == Token::slash && !is_dir_ahead()) {
        next();
        std::size_t pos = peek().pos;
        OperatorExpr d = parse_factor();
        e = e * invert(d, pos);
      } else {
        return e;
      }
    }
  }

  bool is_dir_ahead() const {
    if (peek().kind != Token::slash) return false;
    const Token& t = peek(1);
    return t.kind == Token::ident && (t.text == "dt" || t.text.rfind("dq", 0) == 0);
  }

  OperatorExpr parse_factor() {
    OperatorExpr e = parse_primary();
    if (peek().kind == Token::caret &&
        (peek(1).kind == Token::number || peek(1).kind == Token::minus)) {
      next();
      bool neg = accept(Token::minus);
      if (peek().kind != Token::number) throw ParseError("expected integer exponent", peek().pos);
      long long n = next().value;
      e = power(e, neg ? -n : n, peek().pos);
    }
    return e;
  }

  OperatorExpr power(const OperatorExpr& e, long long n, std::size_t pos) {
    try {
      if (n >= 0) {
        OperatorExpr acc = OperatorExpr::constant(Coeff::one());
        for (long long k = 0; k < n; ++k) acc = acc * e;
        return acc;
      }
      return to_operator(pow_expr(to_cnumber(e), static_cast<int>(n)));
    } catch (const std::invalid_argument& ex) {
      throw ParseError(ex.what(), pos);
    }
  }

  OperatorExpr invert(const OperatorExpr& e, std::size_t pos) {
    try {
      return to_operator(invert_monomial(to_cnumber(e)));
    } catch (const std::invalid_argument& ex) {
      throw ParseError(ex.what(), pos);
    }
  }

  OperatorExpr parse_primary() {
    const Token& t = peek();
    if (t.kind == Token::number) {
      next();
      return OperatorExpr::constant(Coeff::rational(Rational(t.value)));
    }
    if (t.kind == Token::lparen) {
      next();
      OperatorExpr e = parse_expression();
      expect(Token::rparen, "')'");
      return e;
    }
    if (t.kind == Token::ident) return parse_identifier();
    throw ParseError("expected a factor", t.pos);
  }

  // Derivative directions: "/dt", "/dq_i", "/dq^mu", chained.
  std::vector<Dir> parse_dirs() {
    std::vector<Dir> dirs;
    while (is_dir_ahead()) {
      next();  // '/'
      Token t = next();
      if (t.text == "dt") {
        dirs.push_back(Dir::t());
        continue;
      }
      std::string decorated = t.text.substr(2);  // after "dq"
      while (peek().kind == Token::caret && peek(1).kind == Token::ident &&
             starts_with_index_name(peek(1).text)) {
        next();
        decorated += "^" + next().text;
      }
      auto slots = parse_decorated_indices(decorated, t.pos);
      if (slots.size() != 1)
        throw ParseError("a derivative direction takes exactly one index", t.pos);
      dirs.push_back(Dir::q(slots[0]));
    }
    return dirs;
  }

  OperatorExpr parse_identifier() {
    Token t = next();
    std::string text = t.text;

    // d[expr]/dq_i...: formal differentiation of the bracketed expression
    if (text == "d" && peek().kind == Token::lbracket) {
      next();
      OperatorExpr inner = parse_expression();
      expect(Token::rbracket, "']'");
      auto dirs = parse_dirs();
      if (dirs.empty()) throw ParseError("d[...] needs a direction", t.pos);
      try {
        CNumberExpr c = to_cnumber(inner);
        for (const auto& d : dirs) c = derivative(c, d);
        return to_operator(c);
      } catch (const std::invalid_argument& ex) {
        throw ParseError(ex.what(), t.pos);
      }
    }

    if (text == "dS") {
      if (!allow_ops_)
        throw ParseError("operator factor in a c-number expression", t.pos);
      auto dirs = parse_dirs();
      if (dirs.size() != 1) throw ParseError("dS takes exactly one direction", t.pos);
      return OperatorExpr(OpTerm{Coeff::one(), {SDerivFactor{dirs[0]}}});
    }

    // split name from index decorations
    std::string name = text, suffix;
    if (text != "c_light") {
      auto us = text.find('_');
      if (us != std::string::npos) {
        name = text.substr(0, us);
        suffix = text.substr(us);  // keep the '_'
      }
    }
    while (peek().kind == Token::caret && peek(1).kind == Token::ident &&
           starts_with_index_name(peek(1).text)) {
      next();
      suffix += "^" + next().text;
    }
    std::vector<Index> slots =
        suffix.empty() ? std::vector<Index>{} : parse_decorated_indices(suffix, t.pos);

    if (name == "hbar" || name == "m" || name == "m0" || name == "c_light" ||
        name == "i") {
      if (!slots.empty()) throw ParseError("constants take no indices", t.pos);
      Coeff c = Coeff::one();
      if (name == "hbar") c.hbar = 1;
      if (name == "m") c.mass = 1;
      if (name == "m0") c.rest_mass = 1;
      if (name == "c_light") c.c_light = 1;
      if (name == "i") c.i_pow = 1;
      return OperatorExpr::constant(c);
    }

    if (name == "p") {
      if (!allow_ops_)
        throw ParseError("operator factor in a c-number expression", t.pos);
      if (slots.size() != 1) throw ParseError("p takes exactly one index", t.pos);
      return OperatorExpr(OpTerm{Coeff::one(), {MomentumFactor{slots[0]}}});
    }

    if (name == "dq" || name == "dt")
      throw ParseError("'" + name + "' is only valid after d[...] or dS", t.pos);

    if (!symbol_table().count(name)) throw ParseError("unknown symbol '" + name + "'", t.pos);
    const SymbolInfo& info = symbol_info(name);
    if (static_cast<int>(slots.size()) != info.arity)
      throw ParseError("'" + name + "' takes " + std::to_string(info.arity) +
                           " index(es)",
                       t.pos);
    skip_argument_list();
    return OperatorExpr(OpTerm{Coeff::one(), {FnFactor{name, slots, {}, 1}}});
  }

  // Decorative argument lists like a(q,t) parse and are discarded.
  void skip_argument_list() {
    if (peek().kind != Token::lparen) return;
    std::size_t open = peek().pos;
    next();
    int depth = 1;
    while (depth > 0) {
      const Token& t = next();
      if (t.kind == Token::end) throw ParseError("unterminated argument list", open);
      if (t.kind == Token::lparen) ++depth;
      if (t.kind == Token::rparen) --depth;
    }
  }

  std::vector<Token> toks_;
  std::size_t k_ = 0;
  bool allow_ops_;
};

}  // namespace detail

inline OperatorExpr parse_operator_expr(std::string_view src) {
  return detail::Parser(src, true).parse();
}

inline CNumberExpr parse_cnumber_expr(std::string_view src) {
  return to_cnumber(detail::Parser(src, false).parse());
}

}  // namespace qhj::opalg
