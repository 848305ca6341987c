#pragma once

#include <cstddef>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "xtrio/error.hpp"
#include "xtrio/formula.hpp"
#include "xtrio/lasso.hpp"
#include "xtrio/lexer.hpp"
#include "xtrio/structure.hpp"

namespace xtrio {

enum class LOp : std::uint8_t { True, Atom, Not, And, Next, Yesterday, Until, Since };

constexpr int arity(LOp op) noexcept {
  switch (op) {
    case LOp::True:
    case LOp::Atom: return 0;
    case LOp::And:
    case LOp::Until:
    case LOp::Since: return 2;
    default: return 1;
  }
}

/// PLTLB formula handle; subtrees are shared, equality is structural.
class LtlFormula {
 public:
  LtlFormula() = default;

  LOp op() const;
  const std::string& name() const;
  const LtlFormula& lhs() const;
  const LtlFormula& rhs() const;
  const void* id() const noexcept { return node_.get(); }
  bool empty() const noexcept { return node_ == nullptr; }

  static LtlFormula make(LOp op, std::string name = {}, LtlFormula lhs = {}, LtlFormula rhs = {});

  friend bool operator==(const LtlFormula& a, const LtlFormula& b) {
    if (a.node_ == b.node_) return true;
    if (!a.node_ || !b.node_) return false;
    if (a.op() != b.op() || a.name() != b.name()) return false;
    const int n = arity(a.op());
    if (n >= 1 && !(a.lhs() == b.lhs())) return false;
    return n < 2 || a.rhs() == b.rhs();
  }

 private:
  struct Node;
  const Node& node() const;
  std::shared_ptr<const Node> node_;
};

struct LtlFormula::Node {
  LOp op;
  std::string name;
  LtlFormula lhs;
    LtlFormula rhs;
};

inline const LtlFormula::Node& LtlFormula::node() const {
  if (!node_) throw InternalError("access to an empty PLTLB formula handle");
  return *node_;
}

inline LOp LtlFormula::op() const { return node().op; }
inline const std::string& LtlFormula::name() const { return node().name; }
inline const LtlFormula& LtlFormula::lhs() const { return node().lhs; }
inline const LtlFormula& LtlFormula::rhs() const { return node().rhs; }

inline LtlFormula LtlFormula::make(LOp op, std::string name, LtlFormula lhs, LtlFormula rhs) {
  LtlFormula f;
  f.node_ = std::make_shared<const Node>(Node{op, std::move(name), std::move(lhs), std::move(rhs)});
  return f;
}

/// Reserved trace atoms: standard position and filler.
inline const std::string kST = "ST";
inline const std::string kFL = "FL";

namespace ltl {

inline LtlFormula truth() { return LtlFormula::make(LOp::True); }
inline LtlFormula atom(std::string name) {
  if (name != kST && name != kFL && !is_atom_name(name))
    throw ValidationError("invalid PLTLB atom name '" + name + "'");
  return LtlFormula::make(LOp::Atom, std::move(name));
}
inline LtlFormula st() { return atom(kST); }
inline LtlFormula fl() { return atom(kFL); }
inline LtlFormula neg(LtlFormula f) { return LtlFormula::make(LOp::Not, {}, std::move(f)); }
inline LtlFormula conj(LtlFormula a, LtlFormula b) { return LtlFormula::make(LOp::And, {}, std::move(a), std::move(b)); }
inline LtlFormula next(LtlFormula f) { return LtlFormula::make(LOp::Next, {}, std::move(f)); }
inline LtlFormula yesterday(LtlFormula f) { return LtlFormula::make(LOp::Yesterday, {}, std::move(f)); }
inline LtlFormula until(LtlFormula a, LtlFormula b) {
  return LtlFormula::make(LOp::Until, {}, std::move(a), std::move(b));
}
inline LtlFormula since(LtlFormula a, LtlFormula b) {
  return LtlFormula::make(LOp::Since, {}, std::move(a), std::move(b));
}

inline LtlFormula falsity() { return neg(truth()); }
inline LtlFormula disj(LtlFormula a, LtlFormula b) { return neg(conj(neg(std::move(a)), neg(std::move(b)))); }
inline LtlFormula implies(LtlFormula a, LtlFormula b) { return neg(conj(std::move(a), neg(std::move(b)))); }
inline LtlFormula iff(const LtlFormula& a, const LtlFormula& b) { return conj(implies(a, b), implies(b, a)); }
inline LtlFormula eventually(LtlFormula f) { return until(truth(), std::move(f)); }
inline LtlFormula always(LtlFormula f) { return neg(eventually(neg(std::move(f)))); }
inline LtlFormula once(LtlFormula f) { return since(truth(), std::move(f)); }
inline LtlFormula historically(LtlFormula f) { return neg(once(neg(std::move(f)))); }

inline LtlFormula conj_all(const std::vector<LtlFormula>& fs) {
  if (fs.empty()) return truth();
  LtlFormula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = conj(acc, fs[i]);
  return acc;
}

}  // namespace ltl

/// Distinct shared nodes reachable from f, children before parents.
inline std::vector<LtlFormula> postorder(const LtlFormula& f) {
  std::vector<LtlFormula> order;
  std::unordered_set<const void*> done;
  std::vector<std::pair<LtlFormula, bool>> stack{{f, false}};
  while (!stack.empty()) {
    auto [g, expanded] = stack.back();
    stack.pop_back();
    if (done.count(g.id())) continue;
    if (expanded) {
      done.insert(g.id());
      order.push_back(g);
      continue;
    }
    stack.emplace_back(g, true);
    const int a = arity(g.op());
    if (a == 2) stack.emplace_back(g.rhs(), false);
    if (a >= 1) stack.emplace_back(g.lhs(), false);
  }
  return order;
}

/// Number of distinct shared nodes (the size of the formula as a DAG).
inline std::size_t dag_size(const LtlFormula& f) { return postorder(f).size(); }

inline std::set<std::string> atoms_of(const LtlFormula& f) {
  std::set<std::string> out;
  for (const auto& g : postorder(f))
    if (g.op() == LOp::Atom) out.insert(g.name());
  return out;
}

/// Ultimately periodic word `prefix . loop^omega` over sets of atoms.
struct LassoTrace {
  std::vector<Label> prefix;
  std::vector<Label> loop;

  std::size_t size() const { return prefix.size() + loop.size(); }
  const Label& at(std::size_t i) const { return lasso_at(prefix, loop, i); }

  friend bool operator==(const LassoTrace&, const LassoTrace&) = default;
};

inline LassoTrace canonicalize(LassoTrace t) {
  canonicalize_lasso(t.prefix, t.loop);
  return t;
}

namespace detail {

inline bool ltl_is_or(const LtlFormula& f) {
  return f.op() == LOp::Not && f.lhs().op() == LOp::And && f.lhs().lhs().op() == LOp::Not &&
         f.lhs().rhs().op() == LOp::Not;
}

inline int ltl_strength(const LtlFormula& f) {
  if (ltl_is_or(f)) return 1;
  if (f.op() == LOp::And) return 2;
  if (f.op() == LOp::Not && f.lhs().op() != LOp::True) return 3;
  return 4;
}

inline void render_ltl(const LtlFormula& f, std::string& out);

inline void render_ltl_at(const LtlFormula& f, int min_strength, std::string& out) {
  if (ltl_strength(f) < min_strength) {
    out += '(';
    render_ltl(f, out);
    out += ')';
  } else {
    render_ltl(f, out);
  }
}

inline void render_ltl(const LtlFormula& f, std::string& out) {
  switch (f.op()) {
    case LOp::True: out += "true"; return;
    case LOp::Atom: out += f.name(); return;
    case LOp::Not:
      if (f.lhs().op() == LOp::True) {
        out += "false";
      } else if (ltl_is_or(f)) {
        render_ltl_at(f.lhs().lhs().lhs(), 1, out);
        out += " || ";
        render_ltl_at(f.lhs().rhs().lhs(), 2, out);
      } else {
        out += '!';
        render_ltl_at(f.lhs(), 3, out);
      }
      return;
    case LOp::And:
      render_ltl_at(f.lhs(), 2, out);
      out += " && ";
      render_ltl_at(f.rhs(), 3, out);
      return;
    case LOp::Next:
    case LOp::Yesterday:
      out += f.op() == LOp::Next ? "XL(" : "YL(";
      render_ltl(f.lhs(), out);
      out += ')';
      return;
    case LOp::Until:
    case LOp::Since:
      out += f.op() == LOp::Until ? "UL(" : "SL(";
      render_ltl(f.lhs(), out);
      out += ", ";
      render_ltl(f.rhs(), out);
      out += ')';
      return;
  }
}

class LtlParser {
 public:
  explicit LtlParser(TokenStream& ts) : ts_(ts) {}

  LtlFormula expr() {
    LtlFormula f = imp();
    while (ts_.accept_punct("<->")) f = ltl::iff(f, imp());
    return f;
  }

 private:
  LtlFormula imp() {
    LtlFormula f = disj();
    if (ts_.accept_punct("->")) return ltl::implies(f, imp());
    return f;
  }
  LtlFormula disj() {
    LtlFormula f = conj();
    while (ts_.accept_punct("||")) f = ltl::disj(f, conj());
    return f;
  }
  LtlFormula conj() {
    LtlFormula f = unary();
    while (ts_.accept_punct("&&")) f = ltl::conj(f, unary());
    return f;
  }
  LtlFormula unary() {
    if (ts_.accept_punct("!")) return ltl::neg(unary());
    if (ts_.accept_punct("(")) {
      LtlFormula f = expr();
      ts_.expect_punct(")");
      return f;
    }
    const Token& t = ts_.expect(TokenKind::Ident, "a PLTLB formula");
    const std::string w = t.text;
    if (w == "true") return ltl::truth();
    if (w == "false") return ltl::falsity();
    if (w == "XL" || w == "YL") {
      ts_.expect_punct("(");
      LtlFormula f = expr();
      ts_.expect_punct(")");
      return w == "XL" ? ltl::next(f) : ltl::yesterday(f);
    }
    if (w == "UL" || w == "SL") {
      ts_.expect_punct("(");
      LtlFormula a = expr();
      ts_.expect_punct(",");
      LtlFormula b = expr();
      ts_.expect_punct(")");
      return w == "UL" ? ltl::until(a, b) : ltl::since(a, b);
    }
    std::string name = w;
    if (ts_.accept_punct("=")) {
      const Token& v = ts_.peek();
      if (v.kind != TokenKind::Ident && v.kind != TokenKind::Int) ts_.fail("expected a value");
      name += "=" + ts_.take().text;
    }
    if (name != kST && name != kFL && !is_atom_name(name))
      throw ParseError("invalid atom name '" + name + "'", t.line, t.column);
    return ltl::atom(name);
  }

  TokenStream& ts_;
};

}  // namespace detail

/// Prefix syntax with XL, YL, UL, SL and the C-style connectives. Shared
/// subformulas are printed once per occurrence.
inline std::string render_ltl(const LtlFormula& f) {
  std::string out;
  detail::render_ltl(f, out);
  return out;
}

inline LtlFormula parse_ltl(std::string_view text) {
  TokenStream ts(Lexer(text).tokenize());
  detail::LtlParser p(ts);
  LtlFormula f = p.expr();
  if (!ts.at_end()) ts.fail("unexpected trailing input");
  return f;
}

/// Trace format: "prefix N", "loop M", then "INDEX: ST|NS|FL atoms" lines.
inline LassoTrace parse_trace(std::string_view text) {
  std::vector<Label> labels;
  const auto [p, l] = detail::read_indexed(text, nullptr, {"ST", "NS", "FL"},
                                           [&](const std::string& tag, std::vector<std::string> words, int line) {
                                             Label lab;
                                             if (tag != "NS") lab.insert(tag);
                                             for (auto& a : words) {
                                               if (a != kST && a != kFL && !is_atom_name(a))
                                                 throw ParseError("invalid atom name '" + a + "'", line, 1);
                                               lab.insert(std::move(a));
                                             }
                                             labels.push_back(std::move(lab));
                                           });
  LassoTrace t;
  t.prefix.assign(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(p));
  t.loop.assign(labels.begin() + static_cast<std::ptrdiff_t>(p), labels.end());
  return t;
}

inline std::string render_trace(const LassoTrace& t) {
  std::ostringstream os;
  os << "prefix " << t.prefix.size() << "\nloop " << t.loop.size() << "\n";
  for (std::size_t i = 0; i < t.size(); ++i) {
    const Label& lab = t.at(i);
    const bool st = lab.count(kST) > 0, fl = lab.count(kFL) > 0;
    os << i << ": " << (st ? "ST" : fl ? "FL" : "NS");
    if (st && fl) os << " FL";
    for (const auto& a : lab)
      if (a != kST && a != kFL) os << ' ' << a;
    os << "\n";
  }
  return os.str();
}

}  // namespace xtrio
