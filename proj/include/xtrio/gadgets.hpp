#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "xtrio/derived.hpp"
#include "xtrio/error.hpp"
#include "xtrio/formula.hpp"
#include "xtrio/structure.hpp"

namespace xtrio {

enum class Parity { even, odd };
enum class CounterOp { inc, dec, keep, zero_test };

struct CounterInstr {
  Parity parity = Parity::even;
  CounterOp op = CounterOp::keep;
};

/// Instructions per counter run in order: the j-th even instruction applies at
/// standard instant 2j, the j-th odd one at 2j+1.
struct CounterScript {
  std::vector<CounterInstr> instrs;

  /// Expected counter values (per parity) before each instruction and after
  /// the last one. Throws on an empty script or a dec below zero.
  std::vector<unsigned> expected(Parity p) const {
    if (instrs.empty()) throw ValidationError("counter script is empty");
    std::vector<unsigned> out{0};
    for (const auto& in : instrs) {
      if (in.parity != p) continue;
      unsigned v = out.back();
      switch (in.op) {
        case CounterOp::inc: ++v; break;
        case CounterOp::dec:
          if (v == 0) throw ValidationError("dec scheduled while the counter is 0");
          --v;
          break;
        case CounterOp::zero_test:
          if (v != 0) throw ValidationError("zero test scheduled while the counter is " + std::to_string(v));
          break;
        case CounterOp::keep: break;
      }
      out.push_back(v);
    }
    return out;
  }
};

namespace gadget {

inline Formula E() { return atom("E"); }
inline Formula O() { return atom("O"); }
inline Formula A() { return atom("A"); }
inline Formula B() { return atom("B"); }
inline Formula marker(Parity p) { return p == Parity::even ? E() : O(); }

inline Formula marking(const Formula& self, const Formula& other) {
  const Formula unmarked = conj(neg(other), neg(self));
  return conj(implies(self, disj(next_st(other), next_ns(until(unmarked, conj(neg(next_ns(truth())), unmarked))))),
              iff(self, dist(other, 1)));
}

}  // namespace gadget

/// E/O marking of standard instants, the A-then-B block shape of every
/// micro-chain, and E && B at instant 0.
inline Formula counter_axioms() {
  using namespace gadget;
  const Formula blocks = conj_all({implies(A(), until(conj(A(), next_ns(truth())), B())),
                                   implies(B(), until(B(), neg(next_ns(truth())))), iff(A(), neg(B()))});
  const Formula body = conj_all({marking(E(), O()), marking(O(), E()), neg(conj(E(), O())), blocks});
  return conj_all({E(), B(), alw(body)});
}

/// One counter operation, to be asserted at the standard instant it applies
/// to. The odd variant swaps E and O.
inline Formula counter_op(CounterOp op, Parity parity) {
  using namespace gadget;
  const Formula x = marker(parity);
  const Formula last_a = conj(A(), next_ns(B()));
  switch (op) {
    case CounterOp::inc:
      return implies(x, conj(implies(A(), until(A(), conj(B(), dist(last_a, 2)))), implies(B(), dist(last_a, 2))));
    case CounterOp::dec:
      return implies(x, conj(implies(conj(A(), next_ns(A())),
                                     until(A(), conj_all({A(), next_ns(conj(A(), next_ns(B()))), dist(last_a, 2)}))),
                             implies(last_a, dist(B(), 2))));
    case CounterOp::keep:
      return implies(x, conj(implies(A(), until(A(), conj(last_a, dist(last_a, 2)))), implies(B(), dist(B(), 2))));
    case CounterOp::zero_test: return conj(x, B());
  }
  throw InternalError("unknown counter operation");
}

/// counter_axioms plus every scripted instruction placed at its instant.
inline Formula counter_run(const CounterScript& script) {
  script.expected(Parity::even);
  script.expected(Parity::odd);
  std::vector<Formula> parts{counter_axioms()};
  unsigned long even = 0, odd = 0;
  for (const auto& in : script.instrs) {
    const unsigned long at = in.parity == Parity::even ? 2 * even++ : 2 * odd++ + 1;
    parts.push_back(dist(counter_op(in.op, in.parity), at));
  }
  return conj_all(parts);
}

/// A and B positions of the micro-chain starting at one standard instant.
struct CounterBlock {
  std::uint64_t instant = 0;
  std::size_t a_len = 0;
  std::size_t b_len = 0;
  bool well_formed = true;  // A^a B^b with b >= 1 and A, B exclusive
};

/// Blocks for the first `count` standard instants of a history.
inline std::vector<CounterBlock> counter_blocks(const Structure& s, std::size_t count) {
  std::vector<CounterBlock> out;
  std::size_t i = 0;
  const std::size_t limit = s.prefix_size() + (count + 1) * (s.prefix_size() + s.loop_size() + 1);
  while (out.size() < count && i < limit) {
    if (!s.is_standard(i)) {
      ++i;
      continue;
    }
    CounterBlock b;
    b.instant = s.instant(i).std_part;
    bool in_b = false;
    for (;;) {
      const Label& lab = s.label(i);
      const bool a = lab.count("A") > 0, bb = lab.count("B") > 0;
      if (a == bb) b.well_formed = false;
      if (a && in_b) b.well_formed = false;
      if (bb) in_b = true;
      (a ? b.a_len : b.b_len) += 1;
      const bool last = s.kind(i) == StepKind::macro;
      ++i;
      if (last) break;
      if (i >= limit) {
        b.well_formed = false;
        break;
      }
    }
    if (b.b_len == 0) b.well_formed = false;
    out.push_back(b);
  }
  return out;
}

/// A-block lengths at the first `count` even standard instants.
inline std::vector<std::size_t> even_a_lengths(const Structure& s, std::size_t count) {
  std::vector<std::size_t> out;
  for (const auto& b : counter_blocks(s, 2 * count))
    if (b.instant % 2 == 0) out.push_back(b.a_len);
  out.resize(std::min(out.size(), count));
  return out;
}

}  // namespace xtrio
