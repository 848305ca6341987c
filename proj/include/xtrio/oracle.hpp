#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "xtrio/error.hpp"
#include "xtrio/formula.hpp"
#include "xtrio/structure.hpp"

namespace xtrio {

enum class Phase : std::uint8_t { history, gap };

/// A history point σ_index, or the gap of stuttering non-standard instants
/// between σ_index and a standard σ_{index+1}.
struct EvalPosition {
  std::size_t index = 0;
  Phase phase = Phase::history;

  friend bool operator==(const EvalPosition&, const EvalPosition&) = default;
};

/// Truth values of one formula over the interleaved sequence of history
/// points and gaps, as an ultimately periodic bit word: entries past the
/// stored range repeat the last `period` entries.
class PeriodicBits {
 public:
  PeriodicBits() = default;
  PeriodicBits(std::vector<char> bits, std::size_t start, std::size_t period)
      : bits_(std::move(bits)), start_(start), period_(period) {
    if (bits_.size() != start_ + period_) throw InternalError("periodic word has inconsistent size");
  }

  bool operator[](std::size_t m) const {
    if (m < bits_.size()) return bits_[m];
    return bits_[start_ + (m - start_) % period_];
  }
  std::size_t start() const { return start_; }

 private:
  std::vector<char> bits_;
  std::size_t start_ = 0;
  std::size_t period_ = 1;
};

/// Exact evaluator for X-TRIO_N over an ultimately periodic history.
///
/// Positions interleave history points H_i with a gap G_i after every H_i
/// whose step is macro. From history index prefix+1 on, the position layout
/// is periodic (whether σ_i is standard depends on kind_{i-1}), so every
/// formula denotes an ultimately periodic word over positions.
class XtrioEvaluator {
 public:
  explicit XtrioEvaluator(Structure s) : s_(std::move(s)) {
    const std::size_t p = s_.prefix_size(), l = s_.loop_size();
    for (std::size_t i = 0; i < p + 1 + l; ++i) {
      if (i == p + 1) base_ = layout_.size();
      hist_pos_.push_back(layout_.size());
      layout_.push_back({i, Phase::history});
      if (s_.kind(i) == StepKind::macro) layout_.push_back({i, Phase::gap});
    }
    period_ = layout_.size() - base_;
  }

  const Structure& structure() const { return s_; }

  /// Index of the first periodic position and the period length.
  std::size_t base() const { return base_; }
  std::size_t period() const { return period_; }

  EvalPosition position(std::size_t m) const {
    if (m < layout_.size()) return layout_[m];
    const std::size_t rounds = (m - base_) / period_;
    EvalPosition e = layout_[base_ + (m - base_) % period_];
    e.index += rounds * s_.loop_size();
    return e;
  }

  std::size_t index_of(const EvalPosition& e) const {
    if (e.phase == Phase::gap && s_.kind(e.index) != StepKind::macro)
      throw ValidationError("no gap after history element " + std::to_string(e.index) + " (micro step)");
    const std::size_t first_periodic = s_.prefix_size() + 1;
    std::size_t m;
    if (e.index < first_periodic) {
      m = hist_pos_[e.index];
    } else {
      const std::size_t rel = e.index - first_periodic;
      m = hist_pos_[first_periodic + rel % s_.loop_size()] + (rel / s_.loop_size()) * period_;
    }
    return m + (e.phase == Phase::gap ? 1 : 0);
  }

  bool eval(const Formula& f, const EvalPosition& at) { return bits(f)[index_of(at)]; }
  bool eval_index(const Formula& f, std::size_t m) { return bits(f)[m]; }

  const PeriodicBits& bits(const Formula& f) {
    if (auto it = memo_.find(f.id()); it != memo_.end()) return it->second;
    for (const Formula& g : postorder(f)) {
      if (memo_.count(g.id())) continue;
      keep_.push_back(g);
      memo_.emplace(g.id(), compute(g));
    }
    return memo_.at(f.id());
  }

 private:
  bool standard_point(std::size_t m) const {
    const EvalPosition e = position(m);
    return e.phase == Phase::history && s_.is_standard(e.index);
  }

  /// Position of the next standard history point after standard point m, if
  /// the history has one (it does not past a Zeno accumulation point).
  std::optional<std::size_t> next_standard(std::size_t m) const {
    const EvalPosition e = position(m);
    const std::size_t horizon = e.index + s_.prefix_size() + s_.loop_size() + 1;
    for (std::size_t i = e.index; i < horizon; ++i)
      if (s_.kind(i) == StepKind::macro) return index_of({i + 1, Phase::history});
    return std::nullopt;
  }

  std::optional<std::size_t> previous_standard(std::size_t m) const {
    const EvalPosition e = position(m);
    for (std::size_t j = e.index; j-- > 0;)
      if (s_.is_standard(j)) return index_of({j, Phase::history});
    return std::nullopt;
  }

  template <class F>
  PeriodicBits tabulate(std::size_t start, F value) const {
    std::vector<char> bits(start + period_);
    for (std::size_t m = 0; m < bits.size(); ++m) bits[m] = value(m) ? 1 : 0;
    return PeriodicBits(std::move(bits), start, period_);
  }

  PeriodicBits compute(const Formula& g) {
    switch (g.op()) {
      case Op::True: return tabulate(base_, [](std::size_t) { return true; });
      case Op::NowSt: return tabulate(base_, [&](std::size_t m) { return standard_point(m); });
      case Op::Atom:
        return tabulate(base_, [&](std::size_t m) { return s_.label(position(m).index).count(g.name()) > 0; });
      case Op::Not: {
        const PeriodicBits& a = memo_.at(g.lhs().id());
        return tabulate(a.start(), [&](std::size_t m) { return !a[m]; });
      }
      case Op::And: {
        const PeriodicBits& a = memo_.at(g.lhs().id());
        const PeriodicBits& b = memo_.at(g.rhs().id());
        return tabulate(std::max(a.start(), b.start()), [&](std::size_t m) { return a[m] && b[m]; });
      }
      case Op::NextSt:
      case Op::NextNs: {
        const PeriodicBits& a = memo_.at(g.lhs().id());
        const bool want_macro = g.op() == Op::NextSt;
        return tabulate(std::max(a.start(), base_), [&](std::size_t m) {
          const EvalPosition e = position(m);
          if (!want_macro && e.phase == Phase::gap) return false;
          const bool macro = s_.kind(e.index) == StepKind::macro;
          return macro == want_macro && a[index_of({e.index + 1, Phase::history})];
        });
      }
      case Op::DistEps: {
        const PeriodicBits& a = memo_.at(g.lhs().id());
        return tabulate(std::max(a.start(), base_), [&](std::size_t m) {
          const EvalPosition e = position(m);
          if (e.phase == Phase::gap) return a[m];
          if (s_.kind(e.index) == StepKind::micro) return a[index_of({e.index + 1, Phase::history})];
          return a[m + 1];
        });
      }
      case Op::DistPlusOne: {
        const PeriodicBits& a = memo_.at(g.lhs().id());
        return tabulate(std::max(a.start(), base_), [&](std::size_t m) {
          if (!standard_point(m)) return false;
          const auto t = next_standard(m);
          return t && a[*t];
        });
      }
      case Op::DistMinusOne: {
        const PeriodicBits& a = memo_.at(g.lhs().id());
        // The target lies up to one period back, so periodicity starts one
        // period after the operand's.
        return tabulate(std::max(a.start(), base_) + period_, [&](std::size_t m) {
          if (!standard_point(m)) return false;
          const auto t = previous_standard(m);
          return t && a[*t];
        });
      }
      case Op::Until: return until_bits(memo_.at(g.lhs().id()), memo_.at(g.rhs().id()));
      case Op::Since: return since_bits(memo_.at(g.lhs().id()), memo_.at(g.rhs().id()));
    }
    throw InternalError("unknown operator");
  }

  // Least fixpoint of U(m) = b(m) || (a(m) && U(m+1)) over positions.
  PeriodicBits until_bits(const PeriodicBits& a, const PeriodicBits& b) const {
    const std::size_t start = std::max({a.start(), b.start(), base_});
    std::vector<char> u(start + period_, 0);
    bool next = false;
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t m = start + period_; m-- > start;) {
        next = b[m] || (a[m] && next);
        u[m] = next ? 1 : 0;
      }
    }
    for (std::size_t m = start; m-- > 0;) {
      next = b[m] || (a[m] && next);
      u[m] = next ? 1 : 0;
    }
    return PeriodicBits(std::move(u), start, period_);
  }

  // S(m) = b(m) || (a(m) && carry). Between history points nothing lies in
  // between; a gap contributes its whole run of instants, so stepping out of
  // a gap also requires a to hold throughout it.
  PeriodicBits since_bits(const PeriodicBits& a, const PeriodicBits& b) const {
    const std::size_t start = std::max({a.start(), b.start(), base_}) + period_;
    std::vector<char> s(start + period_, 0);
    bool prev = false;
    for (std::size_t m = 0; m < s.size(); ++m) {
      bool carry = false;
      if (m > 0) carry = position(m - 1).phase == Phase::gap ? (a[m - 1] && prev) : prev;
      prev = b[m] || (a[m] && carry);
      s[m] = prev ? 1 : 0;
    }
    return PeriodicBits(std::move(s), start, period_);
  }

  Structure s_;
  std::vector<EvalPosition> layout_;
  std::vector<std::size_t> hist_pos_;
  std::size_t base_ = 0;
  std::size_t period_ = 1;
  std::unordered_map<const void*, PeriodicBits> memo_;
  std::vector<Formula> keep_;
};

inline bool evaluate_xtrio(const Structure& s, const Formula& f, const EvalPosition& at = {}) {
  XtrioEvaluator ev(s);
  return ev.eval(f, at);
}

}  // namespace xtrio
