#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <vector>

#include "xtrio/error.hpp"

namespace xtrio::sat {

enum class Result { sat, unsat };

/// Conflict-driven clause-learning solver. Literals use the DIMACS
/// convention: variable v >= 1 is the literal v, its negation -v.
///
/// Two watched literals with blockers, first-UIP learning with recursive
/// minimization, VSIDS with phase saving, Luby restarts and LBD-based
/// reduction of the learnt clause database. Runs are fully deterministic.
class Solver {
 public:
  int new_var() {
    const int v = num_vars_++;
    assigns_.push_back(kUndef);
    level_.push_back(0);
    reason_.push_back(kNoReason);
    activity_.push_back(0.0);
    phase_.push_back(1);
    seen_.push_back(0);
    heap_index_.push_back(-1);
    watches_.emplace_back();
    watches_.emplace_back();
    heap_insert(v);
    return v + 1;
  }

  int num_vars() const { return num_vars_; }

  void reserve_vars(int n) {
    while (num_vars_ < n) new_var();
  }

  /// Adds a clause; must be called before solve() or between solve() calls
  /// (the solver backtracks to level 0 first).
  void add_clause(const std::vector<int>& dimacs) {
    if (!ok_) return;
    backtrack(0);
    std::vector<int> c;
    c.reserve(dimacs.size());
    for (int d : dimacs) {
      if (d == 0) throw ValidationError("literal 0 is not allowed inside a clause");
      reserve_vars(std::abs(d));
      c.push_back(to_lit(d));
    }
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    std::size_t j = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i + 1 < c.size() && c[i + 1] == (c[i] ^ 1)) return;  // tautology
      const std::uint8_t v = value(c[i]);
      if (v == kTrue) return;
      if (v == kFalse) continue;
      c[j++] = c[i];
    }
    c.resize(j);
    if (c.empty()) {
      ok_ = false;
      return;
    }
    if (c.size() == 1) {
      enqueue(c[0], kNoReason);
      if (propagate() != kNoReason) ok_ = false;
      return;
    }
    attach(make_clause(std::move(c), false));
    ++original_;
  }

  Result solve() {
    if (!ok_) return Result::unsat;
    backtrack(0);
    if (propagate() != kNoReason) {
      ok_ = false;
      return Result::unsat;
    }
    max_learnts_ = std::max<double>(original_ / 3.0, 2000.0);
    for (std::uint64_t restart = 0;; ++restart) {
      const std::uint64_t budget = luby(restart) * 100;
      const int r = search(budget);
      if (r == 1) {
        model_.assign(assigns_.begin(), assigns_.end());
        backtrack(0);
        return Result::sat;
      }
      if (r == 0) {
        ok_ = false;
        return Result::unsat;
      }
    }
  }

  /// Value of variable v (1-based) in the last model.
  bool model_value(int v) const {
    if (v < 1 || static_cast<std::size_t>(v) > model_.size()) throw ValidationError("variable out of range");
    return model_[static_cast<std::size_t>(v - 1)] == kTrue;
  }

  std::uint64_t conflicts() const { return conflicts_; }
  std::uint64_t decisions() const { return decisions_; }

 private:
  static constexpr std::uint8_t kFalse = 0, kTrue = 1, kUndef = 2;
  static constexpr int kNoReason = -1;

  struct Clause {
    std::vector<int> lits;
    bool learnt = false;
    bool deleted = false;
    unsigned lbd = 0;
    double activity = 0.0;
  };
  struct Watcher {
    int cref;
    int blocker;
  };

  static int to_lit(int d) { return d > 0 ? 2 * (d - 1) : 2 * (-d - 1) + 1; }
  static int var(int lit) { return lit >> 1; }
  static bool sign(int lit) { return lit & 1; }

  std::uint8_t value(int lit) const {
    const std::uint8_t a = assigns_[static_cast<std::size_t>(var(lit))];
    if (a == kUndef) return kUndef;
    return static_cast<std::uint8_t>(a ^ static_cast<std::uint8_t>(sign(lit)));
  }

  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  int make_clause(std::vector<int> lits, bool learnt) {
    Clause c;
    c.lits = std::move(lits);
    c.learnt = learnt;
    int cref;
    if (!free_.empty()) {
      cref = free_.back();
      free_.pop_back();
      clauses_[static_cast<std::size_t>(cref)] = std::move(c);
    } else {
      cref = static_cast<int>(clauses_.size());
      clauses_.push_back(std::move(c));
    }
    return cref;
  }

  void attach(int cref) {
    const auto& l = clauses_[static_cast<std::size_t>(cref)].lits;
    watches_[static_cast<std::size_t>(l[0] ^ 1)].push_back({cref, l[1]});
    watches_[static_cast<std::size_t>(l[1] ^ 1)].push_back({cref, l[0]});
  }

  void enqueue(int lit, int reason) {
    const auto v = static_cast<std::size_t>(var(lit));
    assigns_[v] = sign(lit) ? kFalse : kTrue;
    level_[v] = decision_level();
    reason_[v] = reason;
    trail_.push_back(lit);
  }

  // Returns the conflicting clause or kNoReason.
  int propagate() {
    int conflict = kNoReason;
    while (qhead_ < trail_.size()) {
      const int p = trail_[qhead_++];
      auto& ws = watches_[static_cast<std::size_t>(p)];
      const int false_lit = p ^ 1;
      std::size_t i = 0, j = 0;
      while (i < ws.size()) {
        const Watcher w = ws[i];
        if (value(w.blocker) == kTrue) {
          ws[j++] = ws[i++];
          continue;
        }
        Clause& c = clauses_[static_cast<std::size_t>(w.cref)];
        if (c.deleted) {
          ++i;
          continue;
        }
        auto& lits = c.lits;
        if (lits[0] == false_lit) std::swap(lits[0], lits[1]);
        ++i;
        const int first = lits[0];
        if (first != w.blocker && value(first) == kTrue) {
          ws[j++] = {w.cref, first};
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < lits.size(); ++k) {
          if (value(lits[k]) != kFalse) {
            std::swap(lits[1], lits[k]);
            watches_[static_cast<std::size_t>(lits[1] ^ 1)].push_back({w.cref, first});
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = {w.cref, first};
        if (value(first) == kFalse) {
          conflict = w.cref;
          qhead_ = trail_.size();
          while (i < ws.size()) ws[j++] = ws[i++];
        } else {
          enqueue(first, w.cref);
        }
      }
      ws.resize(j);
      if (conflict != kNoReason) break;
    }
    return conflict;
  }

  void backtrack(int level) {
    if (decision_level() <= level) return;
    const std::size_t stop = trail_lim_[static_cast<std::size_t>(level)];
    for (std::size_t i = trail_.size(); i-- > stop;) {
      const auto v = static_cast<std::size_t>(var(trail_[i]));
      phase_[v] = assigns_[v] == kFalse ? 1 : 0;
      assigns_[v] = kUndef;
      reason_[v] = kNoReason;
      if (heap_index_[v] < 0) heap_insert(static_cast<int>(v));
    }
    trail_.resize(stop);
    trail_lim_.resize(static_cast<std::size_t>(level));
    qhead_ = stop;
  }

  // Conflict analysis to the first unique implication point.
  void analyze(int conflict, std::vector<int>& learnt, int& back_level) {
    learnt.assign(1, 0);
    int pending = 0;
    int p = -1;
    std::size_t index = trail_.size();
    do {
      Clause& c = clauses_[static_cast<std::size_t>(conflict)];
      if (c.learnt) bump_clause(c);
      for (std::size_t k = (p == -1 ? 0 : 1); k < c.lits.size(); ++k) {
        const int q = c.lits[k];
        const auto v = static_cast<std::size_t>(var(q));
        if (seen_[v] || level_[v] == 0) continue;
        bump_var(static_cast<int>(v));
        seen_[v] = 1;
        if (level_[v] >= decision_level()) ++pending;
        else learnt.push_back(q);
      }
      while (!seen_[static_cast<std::size_t>(var(trail_[--index]))]) {
      }
      p = trail_[index];
      conflict = reason_[static_cast<std::size_t>(var(p))];
      seen_[static_cast<std::size_t>(var(p))] = 0;
      --pending;
      if (pending > 0) {
        // Reason clauses keep the implied literal in front.
        Clause& r = clauses_[static_cast<std::size_t>(conflict)];
        if (r.lits[0] != p) std::swap(r.lits[0], r.lits[1]);
      }
    } while (pending > 0);
    learnt[0] = p ^ 1;

    // Recursive minimization.
    to_clear_.assign(learnt.begin(), learnt.end());
    std::uint32_t levels = 0;
    for (std::size_t i = 1; i < learnt.size(); ++i) levels |= abstract_level(var(learnt[i]));
    std::size_t j = 1;
    for (std::size_t i = 1; i < learnt.size(); ++i) {
      const auto v = static_cast<std::size_t>(var(learnt[i]));
      if (reason_[v] == kNoReason || !redundant(learnt[i], levels)) learnt[j++] = learnt[i];
    }
    learnt.resize(j);
    for (int l : to_clear_) seen_[static_cast<std::size_t>(var(l))] = 0;

    back_level = 0;
    if (learnt.size() > 1) {
      std::size_t max_i = 1;
      for (std::size_t i = 2; i < learnt.size(); ++i)
        if (level_[static_cast<std::size_t>(var(learnt[i]))] > level_[static_cast<std::size_t>(var(learnt[max_i]))])
          max_i = i;
      std::swap(learnt[1], learnt[max_i]);
      back_level = level_[static_cast<std::size_t>(var(learnt[1]))];
    }
  }

  std::uint32_t abstract_level(int v) const {
    return 1u << (static_cast<unsigned>(level_[static_cast<std::size_t>(v)]) & 31u);
  }

  bool redundant(int lit, std::uint32_t levels) {
    std::vector<int> stack{lit};
    const std::size_t top = to_clear_.size();
    while (!stack.empty()) {
      const int q = stack.back();
      stack.pop_back();
      const Clause& c = clauses_[static_cast<std::size_t>(reason_[static_cast<std::size_t>(var(q))])];
      for (std::size_t k = 1; k < c.lits.size(); ++k) {
        const int r = c.lits[k];
        const auto v = static_cast<std::size_t>(var(r));
        if (seen_[v] || level_[v] == 0) continue;
        if (reason_[v] != kNoReason && (abstract_level(static_cast<int>(v)) & levels) != 0) {
          seen_[v] = 1;
          stack.push_back(r);
          to_clear_.push_back(r);
        } else {
          for (std::size_t x = top; x < to_clear_.size(); ++x) seen_[static_cast<std::size_t>(var(to_clear_[x]))] = 0;
          to_clear_.resize(top);
          return false;
        }
      }
    }
    return true;
  }

  unsigned compute_lbd(const std::vector<int>& lits) {
    ++lbd_stamp_;
    if (lbd_mark_.size() < static_cast<std::size_t>(num_vars_) + 1)
      lbd_mark_.resize(static_cast<std::size_t>(num_vars_) + 1, 0);
    unsigned n = 0;
    for (int l : lits) {
      const auto lv = static_cast<std::size_t>(level_[static_cast<std::size_t>(var(l))]);
      if (lbd_mark_[lv] != lbd_stamp_) {
        lbd_mark_[lv] = lbd_stamp_;
        ++n;
      }
    }
    return n;
  }

  // 1 = sat, 0 = unsat, -1 = restart.
  int search(std::uint64_t budget) {
    std::uint64_t local = 0;
    std::vector<int> learnt;
    for (;;) {
      const int conflict = propagate();
      if (conflict != kNoReason) {
        ++conflicts_;
        ++local;
        if (decision_level() == 0) return 0;
        int back_level = 0;
        analyze(conflict, learnt, back_level);
        backtrack(back_level);
        if (learnt.size() == 1) {
          enqueue(learnt[0], kNoReason);
        } else {
          const int cref = make_clause(learnt, true);
          Clause& c = clauses_[static_cast<std::size_t>(cref)];
          c.lbd = compute_lbd(c.lits);
          bump_clause(c);
          learnts_.push_back(cref);
          attach(cref);
          enqueue(learnt[0], cref);
        }
        var_inc_ /= 0.95;
        clause_inc_ /= 0.999;
        continue;
      }
      if (local >= budget) {
        backtrack(0);
        return -1;
      }
      if (static_cast<double>(learnts_.size()) - static_cast<double>(trail_.size()) >= max_learnts_) {
        reduce_db();
        max_learnts_ *= 1.1;
      }
      const int next = pick_branch();
      if (next < 0) return 1;
      ++decisions_;
      trail_lim_.push_back(trail_.size());
      enqueue(2 * next + phase_[static_cast<std::size_t>(next)], kNoReason);
    }
  }

  int pick_branch() {
    while (!heap_.empty()) {
      const int v = heap_pop();
      if (assigns_[static_cast<std::size_t>(v)] == kUndef) return v;
    }
    return -1;
  }

  bool locked(int cref) const {
    const Clause& c = clauses_[static_cast<std::size_t>(cref)];
    const auto v = static_cast<std::size_t>(var(c.lits[0]));
    return reason_[v] == cref && value(c.lits[0]) == kTrue;
  }

  void reduce_db() {
    std::sort(learnts_.begin(), learnts_.end(), [&](int a, int b) {
      const Clause& x = clauses_[static_cast<std::size_t>(a)];
      const Clause& y = clauses_[static_cast<std::size_t>(b)];
      if (x.lbd != y.lbd) return x.lbd > y.lbd;
      if (x.activity != y.activity) return x.activity < y.activity;
      return a < b;
    });
    std::vector<int> kept;
    const std::size_t half = learnts_.size() / 2;
    for (std::size_t i = 0; i < learnts_.size(); ++i) {
      const int cref = learnts_[i];
      Clause& c = clauses_[static_cast<std::size_t>(cref)];
      if (i < half && c.lbd > 2 && c.lits.size() > 2 && !locked(cref)) {
        c.deleted = true;
      } else {
        kept.push_back(cref);
      }
    }
    learnts_ = std::move(kept);
    // Purge watches of deleted clauses and recycle their slots.
    for (auto& ws : watches_) {
      ws.erase(std::remove_if(ws.begin(), ws.end(),
                              [&](const Watcher& w) { return clauses_[static_cast<std::size_t>(w.cref)].deleted; }),
               ws.end());
    }
    for (std::size_t i = 0; i < clauses_.size(); ++i) {
      if (clauses_[i].deleted && !clauses_[i].lits.empty()) {
        clauses_[i].lits.clear();
        clauses_[i].lits.shrink_to_fit();
        free_.push_back(static_cast<int>(i));
      }
    }
  }

  void bump_var(int v) {
    auto& a = activity_[static_cast<std::size_t>(v)];
    a += var_inc_;
    if (a > 1e100) {
      for (auto& x : activity_) x *= 1e-100;
      var_inc_ *= 1e-100;
    }
    if (heap_index_[static_cast<std::size_t>(v)] >= 0) heap_up(heap_index_[static_cast<std::size_t>(v)]);
  }

  void bump_clause(Clause& c) {
    c.activity += clause_inc_;
    if (c.activity > 1e20) {
      for (int cref : learnts_) clauses_[static_cast<std::size_t>(cref)].activity *= 1e-20;
      clause_inc_ *= 1e-20;
    }
  }

  static std::uint64_t luby(std::uint64_t i) {
    std::uint64_t size = 1, seq = 0;
    while (size < i + 1) {
      ++seq;
      size = 2 * size + 1;
    }
    while (size - 1 != i) {
      size = (size - 1) >> 1;
      --seq;
      i = i % size;
    }
    return std::uint64_t{1} << seq;
  }

  // Binary max-heap on activity; ties broken by lower variable index.
  bool heap_less(int a, int b) const {
    const double x = activity_[static_cast<std::size_t>(a)], y = activity_[static_cast<std::size_t>(b)];
    return x > y || (x == y && a < b);
  }
  void heap_insert(int v) {
    heap_index_[static_cast<std::size_t>(v)] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    heap_up(static_cast<int>(heap_.size()) - 1);
  }
  void heap_up(int i) {
    const int v = heap_[static_cast<std::size_t>(i)];
    while (i > 0) {
      const int parent = (i - 1) / 2;
      if (!heap_less(v, heap_[static_cast<std::size_t>(parent)])) break;
      heap_[static_cast<std::size_t>(i)] = heap_[static_cast<std::size_t>(parent)];
      heap_index_[static_cast<std::size_t>(heap_[static_cast<std::size_t>(i)])] = i;
      i = parent;
    }
    heap_[static_cast<std::size_t>(i)] = v;
    heap_index_[static_cast<std::size_t>(v)] = i;
  }
  void heap_down(int i) {
    const int n = static_cast<int>(heap_.size());
    const int v = heap_[static_cast<std::size_t>(i)];
    for (;;) {
      int child = 2 * i + 1;
      if (child >= n) break;
      if (child + 1 < n && heap_less(heap_[static_cast<std::size_t>(child + 1)], heap_[static_cast<std::size_t>(child)]))
        ++child;
      if (!heap_less(heap_[static_cast<std::size_t>(child)], v)) break;
      heap_[static_cast<std::size_t>(i)] = heap_[static_cast<std::size_t>(child)];
      heap_index_[static_cast<std::size_t>(heap_[static_cast<std::size_t>(i)])] = i;
      i = child;
    }
    heap_[static_cast<std::size_t>(i)] = v;
    heap_index_[static_cast<std::size_t>(v)] = i;
  }
  int heap_pop() {
    const int top = heap_.front();
    heap_index_[static_cast<std::size_t>(top)] = -1;
    const int last = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
      heap_[0] = last;
      heap_index_[static_cast<std::size_t>(last)] = 0;
      heap_down(0);
    }
    return top;
  }

  int num_vars_ = 0;
  bool ok_ = true;
  std::vector<std::uint8_t> assigns_;
  std::vector<std::uint8_t> model_;
  std::vector<int> level_;
  std::vector<int> reason_;
  std::vector<double> activity_;
  std::vector<int> phase_;  // 1 = last assigned false
  std::vector<char> seen_;
  std::vector<int> heap_;
  std::vector<int> heap_index_;
  std::vector<std::vector<Watcher>> watches_;
  std::vector<Clause> clauses_;
  std::vector<int> free_;
  std::vector<int> learnts_;
  std::vector<int> trail_;
  std::vector<std::size_t> trail_lim_;
  std::vector<int> to_clear_;
  std::vector<std::uint32_t> lbd_mark_;
  std::uint32_t lbd_stamp_ = 0;
  std::size_t qhead_ = 0;
  std::size_t original_ = 0;
  double max_learnts_ = 2000.0;
  double var_inc_ = 1.0;
  double clause_inc_ = 1.0;
  std::uint64_t conflicts_ = 0;
  std::uint64_t decisions_ = 0;
};

}  // namespace xtrio::sat
