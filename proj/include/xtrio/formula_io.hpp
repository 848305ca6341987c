#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xtrio/derived.hpp"
#include "xtrio/error.hpp"
#include "xtrio/formula.hpp"
#include "xtrio/lexer.hpp"

namespace xtrio {

namespace detail {

class FormulaParser {
 public:
  explicit FormulaParser(TokenStream& ts) : ts_(ts) {}

  Formula expr() { return iff_level(); }

 private:
  Formula iff_level() {
    Formula f = implies_level();
    while (ts_.accept_punct("<->")) f = iff(f, implies_level());
    return f;
  }

  Formula implies_level() {
    Formula f = or_level();
    if (ts_.accept_punct("->")) return implies(f, implies_level());
    return f;
  }

  Formula or_level() {
    Formula f = and_level();
    while (ts_.accept_punct("||")) f = disj(f, and_level());
    return f;
  }

  Formula and_level() {
    Formula f = unary();
    while (ts_.accept_punct("&&")) f = conj(f, unary());
    return f;
  }

  Formula unary() {
    if (ts_.accept_punct("!")) return neg(unary());
    return primary();
  }

  Formula primary() {
    if (ts_.accept_punct("(")) {
      Formula f = expr();
      ts_.expect_punct(")");
      return f;
    }
    const Token& t = ts_.peek();
    if (t.kind != TokenKind::Ident) ts_.fail("expected a formula");
    const std::string word = t.text;
    if (word == "true") return ts_.take(), truth();
    if (word == "false") return ts_.take(), falsity();
    if (word == "now_st") return ts_.take(), now_st();
    if (word == "Xst" || word == "Xns") {
      ts_.take();
      ts_.expect_punct("(");
      Formula f = expr();
      ts_.expect_punct(")");
      return word == "Xst" ? next_st(f) : next_ns(f);
    }
    if (word == "Until" || word == "Since") {
      ts_.take();
      ts_.expect_punct("(");
      Formula f = expr();
      ts_.expect_punct(",");
      Formula g = expr();
      ts_.expect_punct(")");
      return word == "Until" ? until(f, g) : since(f, g);
    }
    if (word == "Dist") {
      ts_.take();
      ts_.expect_punct("(");
      Formula f = expr();
      ts_.expect_punct(",");
      f = offset(f);
      ts_.expect_punct(")");
      return f;
    }
    if (is_derived_name(word)) return derived();
    if (is_reserved_word(word)) ts_.fail("unexpected keyword");
    if (ts_.is_punct("(", 1)) throw ParseError("unknown operator '" + word + "'", ts_.peek().line, ts_.peek().column);
    ts_.take();
    if (ts_.is_punct("=") || ts_.is_punct("!=")) {
      const bool negated = ts_.take().text == "!=";
      const Token& v = ts_.peek();
      if (v.kind != TokenKind::Ident && v.kind != TokenKind::Int) ts_.fail("expected a value");
      Formula a = atom(word + "=" + ts_.take().text);
      return negated ? neg(a) : a;
    }
    return atom(word);
  }

  static unsigned long to_count(const Token& t) {
    try {
      return std::stoul(t.text);
    } catch (const std::exception&) {
      throw ParseError("offset out of range", t.line, t.column);
    }
  }

  // offset := INT | '-' INT | INT '*' 'eps' | 'eps' | INT '+' (INT '*')? 'eps'
  Formula offset(Formula f) {
    if (ts_.accept_punct("-")) {
      const Token& t = ts_.expect(TokenKind::Int, "an integer offset");
      const unsigned long n = to_count(t);
      if (ts_.is_punct("*") || ts_.is_punct("+")) ts_.fail("negative infinitesimal offsets are not supported");
      for (unsigned long i = 0; i < n; ++i) f = dist_prev(f);
      return f;
    }
    if (ts_.accept_word("eps")) return dist_eps(f);
    const Token& t = ts_.expect(TokenKind::Int, "an offset");
    const unsigned long n = to_count(t);
    if (ts_.accept_punct("*")) {
      ts_.expect_word("eps");
      return dist_eps_n(f, n);
    }
    if (ts_.accept_punct("+")) {
      unsigned long m = 1;
      if (ts_.peek().kind == TokenKind::Int) {
        m = to_count(ts_.take());
        ts_.expect_punct("*");
      }
      ts_.expect_word("eps");
      f = dist_eps_n(f, m);
    }
    for (unsigned long i = 0; i < n; ++i) f = dist_next(f);
    return f;
  }

  Formula derived() {
    const std::string name = ts_.take().text;
    ts_.expect_punct("(");
    std::vector<Formula> args{expr()};
    std::optional<unsigned long> bound;
    while (ts_.accept_punct(",")) {
      if (name == "Within_stable" && ts_.peek().kind == TokenKind::Int) {
        bound = to_count(ts_.take());
        break;
      }
      args.push_back(expr());
    }
    const Token& close = ts_.peek();
    ts_.expect_punct(")");
    try {
      return expand_derived(name, args, bound);
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), close.line, close.column);
    }
  }

  TokenStream& ts_;
};

}  // namespace detail

/// Parses the concrete formula syntax; derived operators and multi-unit
/// offsets are expanded into core constructors.
inline Formula parse_formula(std::string_view text) {
  TokenStream ts(Lexer(text).tokenize());
  detail::FormulaParser p(ts);
  Formula f = p.expr();
  if (!ts.at_end()) ts.fail("unexpected trailing input");
  return f;
}

namespace detail {

// Binding strength: 1 or, 2 and, 3 unary, 4 atomic/prefix.
inline bool is_or(const Formula& f) {
  return f.op() == Op::Not && f.lhs().op() == Op::And && f.lhs().lhs().op() == Op::Not &&
         f.lhs().rhs().op() == Op::Not;
}

inline int strength(const Formula& f) {
  if (is_or(f)) return 1;
  if (f.op() == Op::And) return 2;
  if (f.op() == Op::Not && f.lhs().op() != Op::True) return 3;
  return 4;
}

inline void render(const Formula& f, std::string& out);

inline void render_at(const Formula& f, int min_strength, std::string& out) {
  if (strength(f) < min_strength) {
    out += '(';
    render(f, out);
    out += ')';
  } else {
    render(f, out);
  }
}

inline void render_call(const char* name, const Formula& a, const Formula* b, std::string& out) {
  out += name;
  out += '(';
  render(a, out);
  if (b) {
    out += ", ";
    render(*b, out);
  }
  out += ')';
}

inline void render(const Formula& f, std::string& out) {
  switch (f.op()) {
    case Op::True: out += "true"; return;
    case Op::NowSt: out += "now_st"; return;
    case Op::Atom: out += f.name(); return;
    case Op::Not:
      if (f.lhs().op() == Op::True) {
        out += "false";
      } else if (is_or(f)) {
        render_at(f.lhs().lhs().lhs(), 1, out);
        out += " || ";
        render_at(f.lhs().rhs().lhs(), 2, out);
      } else {
        out += '!';
        render_at(f.lhs(), 3, out);
      }
      return;
    case Op::And:
      render_at(f.lhs(), 2, out);
      out += " && ";
      render_at(f.rhs(), 3, out);
      return;
    case Op::DistPlusOne:
      out += "Dist(";
      render(f.lhs(), out);
      out += ", 1)";
      return;
    case Op::DistMinusOne:
      out += "Dist(";
      render(f.lhs(), out);
      out += ", -1)";
      return;
    case Op::DistEps:
      out += "Dist(";
      render(f.lhs(), out);
      out += ", eps)";
      return;
    case Op::Until: render_call("Until", f.lhs(), &f.rhs(), out); return;
    case Op::Since: render_call("Since", f.lhs(), &f.rhs(), out); return;
    case Op::NextSt: render_call("Xst", f.lhs(), nullptr, out); return;
    case Op::NextNs: render_call("Xns", f.lhs(), nullptr, out); return;
  }
}

}  // namespace detail

/// Renders a core formula so that parse_formula gives back the same tree.
/// `!(!a && !b)` is printed as `a || b`, `!true` as `false`.
inline std::string render_formula(const Formula& f) {
  std::string out;
  detail::render(f, out);
  return out;
}

}  // namespace xtrio
