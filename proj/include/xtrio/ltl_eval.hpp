#pragma once

#include <algorithm>
#include <cstddef>
#include <unordered_map>
#include <vector>

#include "xtrio/ltl.hpp"

namespace xtrio {

/// Exact PLTLB evaluation over a lasso trace.
///
/// The trace is unrolled into a window of prefix + (d+1) loop copies, d being
/// the past-operator nesting depth of the formula. Past values are computed
/// forward from position 0; each level of past nesting can delay the point
/// from which values repeat by at most one loop, so the last copy is already
/// periodic and serves as the successor of the window's end.
class LtlEvaluator {
 public:
  explicit LtlEvaluator(LassoTrace t) : t_(std::move(t)) {
    if (t_.loop.empty()) throw ValidationError("trace loop must be non-empty");
  }

  const LassoTrace& trace() const { return t_; }

  bool eval(const LtlFormula& f, std::size_t pos) {
    const auto& v = values(f);
    const std::size_t n = v.size(), l = t_.loop.size();
    if (pos < n) return v[pos];
    return v[n - l + (pos - (n - l)) % l];
  }

  /// Truth values over the window for f (window length depends on f).
  const std::vector<char>& values(const LtlFormula& f) {
    const std::size_t n = t_.prefix.size() + t_.loop.size() * (past_depth(f) + 1);
    if (n != window_) {
      window_ = n;
      memo_.clear();
      keep_.clear();
    }
    for (const LtlFormula& g : postorder(f)) {
      if (memo_.count(g.id())) continue;
      keep_.push_back(g);
      memo_.emplace(g.id(), compute(g));
    }
    return memo_.at(f.id());
  }

  static std::size_t past_depth(const LtlFormula& f) {
    std::unordered_map<const void*, std::size_t> d;
    for (const LtlFormula& g : postorder(f)) {
      std::size_t x = 0;
      if (arity(g.op()) >= 1) x = d.at(g.lhs().id());
      if (arity(g.op()) == 2) x = std::max(x, d.at(g.rhs().id()));
      if (g.op() == LOp::Yesterday || g.op() == LOp::Since) ++x;
      d[g.id()] = x;
    }
    return d.at(f.id());
  }

 private:
  std::vector<char> compute(const LtlFormula& g) const {
    const std::size_t n = window_, l = t_.loop.size(), last = n - l;
    std::vector<char> v(n, 0);
    auto succ = [&](std::size_t m) { return m + 1 < n ? m + 1 : last; };
    switch (g.op()) {
      case LOp::True: std::fill(v.begin(), v.end(), 1); break;
      case LOp::Atom:
        for (std::size_t m = 0; m < n; ++m) v[m] = t_.at(m).count(g.name()) ? 1 : 0;
        break;
      case LOp::Not: {
        const auto& a = memo_.at(g.lhs().id());
        for (std::size_t m = 0; m < n; ++m) v[m] = !a[m];
        break;
      }
      case LOp::And: {
        const auto& a = memo_.at(g.lhs().id());
        const auto& b = memo_.at(g.rhs().id());
        for (std::size_t m = 0; m < n; ++m) v[m] = a[m] && b[m];
        break;
      }
      case LOp::Next: {
        const auto& a = memo_.at(g.lhs().id());
        for (std::size_t m = 0; m < n; ++m) v[m] = a[succ(m)];
        break;
      }
      case LOp::Yesterday: {
        const auto& a = memo_.at(g.lhs().id());
        for (std::size_t m = 1; m < n; ++m) v[m] = a[m - 1];
        break;
      }
      case LOp::Until: {
        const auto& a = memo_.at(g.lhs().id());
        const auto& b = memo_.at(g.rhs().id());
        // Least fixpoint on the final (periodic) copy, then backwards.
        bool next = false;
        for (int pass = 0; pass < 2; ++pass) {
          for (std::size_t m = n; m-- > last;) {
            next = b[m] || (a[m] && next);
            v[m] = next;
          }
        }
        for (std::size_t m = last; m-- > 0;) {
          next = b[m] || (a[m] && next);
          v[m] = next;
        }
        break;
      }
      case LOp::Since: {
        const auto& a = memo_.at(g.lhs().id());
        const auto& b = memo_.at(g.rhs().id());
        bool prev = false;
        for (std::size_t m = 0; m < n; ++m) {
          prev = b[m] || (a[m] && prev);
          v[m] = prev;
        }
        break;
      }
    }
    return v;
  }

  LassoTrace t_;
  std::size_t window_ = 0;
  std::unordered_map<const void*, std::vector<char>> memo_;
  std::vector<LtlFormula> keep_;
};

inline bool eval_pltlb(const LassoTrace& t, const LtlFormula& f, std::size_t pos = 0) {
  LtlEvaluator ev(t);
  return ev.eval(f, pos);
}

}  // namespace xtrio
