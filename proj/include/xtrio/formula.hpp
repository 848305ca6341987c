#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "xtrio/error.hpp"

namespace xtrio {

/// Constructors of the core X-TRIO_N fragment. Everything else (or, implies,
/// Som, Alw, the stable variants, multi-unit offsets) is sugar over these.
enum class Op : std::uint8_t {
  True,
  NowSt,
  Atom,
  Not,
  And,
  DistPlusOne,
  DistMinusOne,
  DistEps,
  Until,
  Since,
  NextSt,
  NextNs,
};

constexpr int arity(Op op) noexcept {
  switch (op) {
    case Op::True:
    case Op::NowSt:
    case Op::Atom: return 0;
    case Op::And:
    case Op::Until:
    case Op::Since: return 2;
    default: return 1;
  }
}

/// Immutable, shareable formula handle. Subtrees may be shared between
/// several parents; equality is structural.
class Formula {
 public:
  Formula() = default;

  Op op() const;
  const std::string& name() const;
  const Formula& lhs() const;
  const Formula& rhs() const;
  /// Identity of the shared node; stable while any handle is alive.
  const void* id() const noexcept { return node_.get(); }
  bool empty() const noexcept { return node_ == nullptr; }

  static Formula make(Op op, std::string name = {}, Formula lhs = {}, Formula rhs = {});

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;

  const Node& node() const;

  std::shared_ptr<const Node> node_;
};

struct Formula::Node {
  Op op;
  std::string name;
  Formula lhs;
    Formula rhs;
};

inline const Formula::Node& Formula::node() const {
  if (!node_) throw InternalError("access to an empty formula handle");
  return *node_;
}

inline Op Formula::op() const { return node().op; }
inline const std::string& Formula::name() const { return node().name; }
inline const Formula& Formula::lhs() const { return node().lhs; }
inline const Formula& Formula::rhs() const { return node().rhs; }

inline Formula Formula::make(Op op, std::string name, Formula lhs, Formula rhs) {
  Formula f;
  f.node_ = std::make_shared<const Node>(Node{op, std::move(name), std::move(lhs), std::move(rhs)});
  return f;
}

inline bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.op() != b.op() || a.name() != b.name()) return false;
  const int n = arity(a.op());
  if (n >= 1 && !(a.lhs() == b.lhs())) return false;
  if (n == 2 && !(a.rhs() == b.rhs())) return false;
  return true;
}

/// Words with a fixed meaning in the concrete syntax; never atom names.
inline bool is_reserved_word(std::string_view w) {
  static constexpr std::string_view words[] = {
      "true",   "false",      "now_st",  "Xst",          "Xns",          "Dist",       "Until",
      "Since",  "eps",        "Som",     "Alw",          "Until_stable", "Until_st",   "Som_stable",
      "Alw_stable", "Within_stable", "ST",    "FL",         "XL",      "YL",
      "UL",         "SL"};
  return std::find(std::begin(words), std::end(words), w) != std::end(words);
}

/// Atom names are dotted identifiers, optionally followed by `=value`, where
/// the value is an identifier or a natural number (`Rob.load1=true`).
inline bool is_atom_name(std::string_view s) {
  auto word_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
  auto dotted = [&](std::string_view w) {
    if (w.empty() || !(std::isalpha(static_cast<unsigned char>(w[0])) || w[0] == '_')) return false;
    bool prev_dot = false;
    for (char c : w) {
      if (c == '.') {
        if (prev_dot) return false;
        prev_dot = true;
      } else if (word_char(c)) {
        prev_dot = false;
      } else {
        return false;
      }
    }
    return !prev_dot;
  };
  const auto eq = s.find('=');
  const std::string_view lhs = s.substr(0, eq);
  if (!dotted(lhs) || is_reserved_word(lhs)) return false;
  if (eq == std::string_view::npos) return true;
  const std::string_view rhs = s.substr(eq + 1);
  if (rhs.empty()) return false;
  if (std::all_of(rhs.begin(), rhs.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    return true;
  return dotted(rhs) && rhs.find('.') == std::string_view::npos;
}

// Core constructors.
inline Formula truth() { return Formula::make(Op::True); }
inline Formula now_st() { return Formula::make(Op::NowSt); }
inline Formula atom(std::string name) {
  if (!is_atom_name(name)) throw ValidationError("invalid atom name '" + name + "'");
  return Formula::make(Op::Atom, std::move(name));
}
inline Formula neg(Formula f) { return Formula::make(Op::Not, {}, std::move(f)); }
inline Formula conj(Formula a, Formula b) { return Formula::make(Op::And, {}, std::move(a), std::move(b)); }
inline Formula dist_next(Formula f) { return Formula::make(Op::DistPlusOne, {}, std::move(f)); }
inline Formula dist_prev(Formula f) { return Formula::make(Op::DistMinusOne, {}, std::move(f)); }
inline Formula dist_eps(Formula f) { return Formula::make(Op::DistEps, {}, std::move(f)); }
inline Formula until(Formula a, Formula b) { return Formula::make(Op::Until, {}, std::move(a), std::move(b)); }
inline Formula since(Formula a, Formula b) { return Formula::make(Op::Since, {}, std::move(a), std::move(b)); }
inline Formula next_st(Formula f) { return Formula::make(Op::NextSt, {}, std::move(f)); }
inline Formula next_ns(Formula f) { return Formula::make(Op::NextNs, {}, std::move(f)); }

// Sugar, expanded on construction.
inline Formula falsity() { return neg(truth()); }
inline Formula disj(Formula a, Formula b) { return neg(conj(neg(std::move(a)), neg(std::move(b)))); }
inline Formula implies(Formula a, Formula b) { return neg(conj(std::move(a), neg(std::move(b)))); }
inline Formula iff(const Formula& a, const Formula& b) { return conj(implies(a, b), implies(b, a)); }

/// Left fold; the empty conjunction is `true`.
inline Formula conj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return truth();
  Formula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = conj(acc, fs[i]);
  return acc;
}

/// The empty disjunction is `false`.
inline Formula disj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return falsity();
  Formula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = disj(acc, fs[i]);
  return acc;
}

/// Dist(f, n) for n >= 0 as n nested unit jumps; negative n nests DistMinusOne.
inline Formula dist(Formula f, long n) {
  for (; n > 0; --n) f = dist_next(std::move(f));
  for (; n < 0; ++n) f = dist_prev(std::move(f));
  return f;
}

inline Formula dist_eps_n(Formula f, unsigned long n) {
  for (; n > 0; --n) f = dist_eps(std::move(f));
  return f;
}

/// Number of nodes of the formula read as a tree (shared subtrees counted
/// once per occurrence). Saturates instead of overflowing.
inline std::uint64_t tree_size(const Formula& f) {
  std::unordered_map<const void*, std::uint64_t> memo;
  std::function<std::uint64_t(const Formula&)> go = [&](const Formula& g) -> std::uint64_t {
    if (auto it = memo.find(g.id()); it != memo.end()) return it->second;
    std::uint64_t n = 1;
    const int a = arity(g.op());
    if (a >= 1) n += go(g.lhs());
    if (a == 2) n += go(g.rhs());
    n = std::min<std::uint64_t>(n, std::uint64_t{1} << 62);
    memo.emplace(g.id(), n);
    return n;
  };
  return go(f);
}

inline std::size_t depth(const Formula& f) {
  std::unordered_map<const void*, std::size_t> memo;
  std::function<std::size_t(const Formula&)> go = [&](const Formula& g) -> std::size_t {
    if (auto it = memo.find(g.id()); it != memo.end()) return it->second;
    std::size_t d = 0;
    const int a = arity(g.op());
    if (a >= 1) d = go(g.lhs());
    if (a == 2) d = std::max(d, go(g.rhs()));
    memo.emplace(g.id(), d + 1);
    return d + 1;
  };
  return go(f);
}

inline void collect_atoms(const Formula& f, std::set<std::string>& out) {
  std::unordered_set<const void*> seen;
  std::vector<Formula> stack{f};
  while (!stack.empty()) {
    Formula g = std::move(stack.back());
    stack.pop_back();
    if (!seen.insert(g.id()).second) continue;
    if (g.op() == Op::Atom) out.insert(g.name());
    const int a = arity(g.op());
    if (a >= 1) stack.push_back(g.lhs());
    if (a == 2) stack.push_back(g.rhs());
  }
}

inline std::set<std::string> atoms_of(const Formula& f) {
  std::set<std::string> out;
  collect_atoms(f, out);
  return out;
}

/// Post-order list of the distinct shared nodes reachable from `f`.
inline std::vector<Formula> postorder(const Formula& f) {
  std::vector<Formula> order;
  std::unordered_set<const void*> done;
  std::vector<std::pair<Formula, bool>> stack{{f, false}};
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

}  // namespace xtrio
