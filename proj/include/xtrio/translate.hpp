#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "xtrio/error.hpp"
#include "xtrio/formula.hpp"
#include "xtrio/ltl.hpp"
#include "xtrio/ltl_eval.hpp"
#include "xtrio/structure.hpp"

namespace xtrio {

struct TranslationOptions {
  /// Use the table rules verbatim instead of the corrected Xns, Dist(.,1)
  /// and Since rules.
  bool strict_paper = false;
};

/// Translates an X-TRIO_N formula into PLTLB over traces tagged with ST
/// (standard position) and FL (filler between two consecutive standard
/// positions). Each shared input node is translated once, so the output DAG
/// is linear in the input DAG.
class Translator {
 public:
  explicit Translator(TranslationOptions opts = {}) : opts_(opts) {}

  LtlFormula operator()(const Formula& f) {
    for (const Formula& g : postorder(f)) {
      if (memo_.count(g.id())) continue;
      keep_.push_back(g);
      memo_.emplace(g.id(), rule(g));
    }
    return memo_.at(f.id());
  }

 private:
  LtlFormula rule(const Formula& g) {
    auto sub = [&](const Formula& h) { return memo_.at(h.id()); };
    switch (g.op()) {
      case Op::True: return ltl::truth();
      case Op::NowSt: return ltl::st();
      case Op::Atom: return ltl::atom(g.name());
      case Op::Not: return ltl::neg(sub(g.lhs()));
      case Op::And: return ltl::conj(sub(g.lhs()), sub(g.rhs()));
      case Op::NextSt: {
        const LtlFormula a = sub(g.lhs());
        return ltl::next(ltl::disj(ltl::conj(a, ltl::st()), ltl::conj(ltl::fl(), ltl::next(a))));
      }
      case Op::NextNs: {
        const LtlFormula body = ltl::conj(sub(g.lhs()), ltl::neg(ltl::st()));
        return ltl::next(opts_.strict_paper ? body : ltl::conj(body, ltl::neg(ltl::fl())));
      }
      case Op::DistEps: {
        const LtlFormula a = sub(g.lhs());
        return ltl::disj(ltl::next(ltl::conj(a, ltl::neg(ltl::st()))), ltl::conj(ltl::next(ltl::st()), a));
      }
      case Op::DistPlusOne: {
        const LtlFormula jump = ltl::next(ltl::until(ltl::neg(ltl::st()), ltl::conj(sub(g.lhs()), ltl::st())));
        return opts_.strict_paper ? jump : ltl::conj(ltl::st(), jump);
      }
      case Op::DistMinusOne: return ltl::conj(ltl::st(), ltl::yesterday(ltl::since(ltl::neg(ltl::st()), ltl::conj(ltl::st(), sub(g.lhs())))));
      case Op::Until: return ltl::until(sub(g.lhs()), sub(g.rhs()));
      case Op::Since: {
        const LtlFormula a = sub(g.lhs()), b = sub(g.rhs());
        const LtlFormula table =
            ltl::disj(ltl::since(a, ltl::conj(ltl::next(ltl::neg(ltl::st())), b)), ltl::since(a, ltl::conj(ltl::conj(ltl::next(ltl::st()), a), b)));
        return opts_.strict_paper ? table : ltl::disj(b, table);
      }
    }
    throw InternalError("unknown operator");
  }

  TranslationOptions opts_;
  std::unordered_map<const void*, LtlFormula> memo_;
  std::vector<Formula> keep_;
};

inline LtlFormula gamma(const Formula& f, TranslationOptions opts = {}) { return Translator(opts)(f); }

/// Body of A1 under G_L.
inline LtlFormula axiom_a1_body() {
  return ltl::conj(ltl::implies(ltl::st(), ltl::next(ltl::disj(ltl::fl(), ltl::neg(ltl::st())))),
              ltl::implies(ltl::fl(), ltl::conj(ltl::conj(ltl::yesterday(ltl::st()), ltl::neg(ltl::st())), ltl::next(ltl::st()))));
}

/// Body of A2 under G_L.
inline LtlFormula axiom_a2_body(const std::vector<std::string>& atoms) {
  std::vector<LtlFormula> same;
  for (const auto& p : atoms) same.push_back(ltl::iff(ltl::atom(p), ltl::yesterday(ltl::atom(p))));
  return ltl::implies(ltl::fl(), ltl::conj_all(same));
}

/// A1 && A2: the trace starts standard, fillers sit exactly between two
/// standard positions, and fillers copy the atoms of their predecessor.
inline LtlFormula axioms(const std::vector<std::string>& atoms) {
  std::vector<std::string> sorted(atoms.begin(), atoms.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  const LtlFormula a1 = ltl::conj(ltl::st(), ltl::always(axiom_a1_body()));
  if (sorted.empty()) return a1;
  return ltl::conj(a1, ltl::always(axiom_a2_body(sorted)));
}

/// gamma(f) && axioms(atoms of f): the formula whose bounded satisfiability
/// decides satisfiability of f over histories.
inline LtlFormula translate_with_axioms(const Formula& f, TranslationOptions opts = {}) {
  const auto atoms = atoms_of(f);
  return ltl::conj(gamma(f, opts), axioms({atoms.begin(), atoms.end()}));
}

/// Trace of a history: one position per history element (ST iff standard)
/// plus a filler copying the label after every standard element whose step
/// is macro.
inline LassoTrace flatten(const Structure& s) {
  const std::size_t p = s.prefix_size(), l = s.loop_size();
  LassoTrace t;
  // Whether σ_i is standard is periodic only from index p+1 on.
  for (std::size_t i = 0; i < p + 1 + l; ++i) {
    auto& out = i < p + 1 ? t.prefix : t.loop;
    Label lab = s.label(i);
    const bool standard = s.is_standard(i);
    if (standard) lab.insert(kST);
    out.push_back(lab);
    if (standard && s.kind(i) == StepKind::macro) {
      Label filler = s.label(i);
      filler.insert(kFL);
      out.push_back(std::move(filler));
    }
  }
  return canonicalize(std::move(t));
}

/// First position (within prefix + loop) where A1 or A2 fails, if any.
inline std::optional<std::size_t> axiom_violation(const LassoTrace& t, const std::vector<std::string>& atoms) {
  if (!t.at(0).count(kST)) return std::size_t{0};
  LtlEvaluator ev(t);
  const LtlFormula body = ltl::conj(axiom_a1_body(), axiom_a2_body(atoms));
  for (std::size_t i = 0; i < t.size(); ++i)
    if (!ev.eval(body, i)) return i;
  return std::nullopt;
}

/// Inverse of flatten: fillers are dropped and the step leading into a
/// position is macro iff the position is standard.
inline Structure unflatten(const LassoTrace& t) {
  std::set<std::string> atoms;
  for (std::size_t i = 0; i < t.size(); ++i)
    for (const auto& a : t.at(i))
      if (a != kST && a != kFL) atoms.insert(a);
  if (auto bad = axiom_violation(t, {atoms.begin(), atoms.end()}))
    throw ValidationError("trace violates the well-formedness axioms at position " + std::to_string(*bad));

  auto strip = [](Label lab) {
    lab.erase(kST);
    lab.erase(kFL);
    return lab;
  };
  struct Point {
    Label label;
    bool standard;
  };
  std::vector<Point> prefix, loop;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const Label& lab = t.at(i);
    if (lab.count(kFL)) continue;
    (i < t.prefix.size() ? prefix : loop).push_back({strip(lab), lab.count(kST) > 0});
  }
  auto following = [&](std::size_t i) -> const Point& {
    const std::size_t n = prefix.size();
    if (i + 1 < n) return prefix[i + 1];
    return loop[(i + 1 - n) % loop.size()];
  };
  std::vector<HistoryStep> sp, sl;
  for (std::size_t i = 0; i < prefix.size() + loop.size(); ++i) {
    const Point& cur = i < prefix.size() ? prefix[i] : loop[i - prefix.size()];
    HistoryStep step{following(i).standard ? StepKind::macro : StepKind::micro, cur.label};
    (i < prefix.size() ? sp : sl).push_back(std::move(step));
  }
  return canonicalize(Structure(std::move(sp), std::move(sl), {atoms.begin(), atoms.end()}));
}

}  // namespace xtrio
