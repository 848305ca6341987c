#pragma once

#include <cstddef>
#include <optional>

#include "xtrio/bmc.hpp"
#include "xtrio/formula.hpp"
#include "xtrio/oracle.hpp"
#include "xtrio/structure.hpp"
#include "xtrio/translate.hpp"

namespace xtrio {

struct XtrioVerdict {
  bool sat = false;
  std::optional<LassoTrace> trace;     // flattened witness
  std::optional<Structure> structure;  // the same witness as a history
  std::size_t bound = 0;
};

/// Bounded satisfiability of an X-TRIO_N formula: Γ(f) && axioms through
/// BMC. The witness is unflattened and re-evaluated with the direct
/// semantics before it is returned.
inline XtrioVerdict check_xtrio(const Formula& f, std::size_t k, const SolveOptions& opts = {},
                                TranslationOptions topts = {}) {
  const Verdict v = check_bounded(translate_with_axioms(f, topts), k, opts);
  XtrioVerdict out;
  out.bound = k;
  if (!v.sat) return out;
  out.sat = true;
  out.trace = v.witness;
  Structure s = unflatten(*v.witness);
  if (!topts.strict_paper && !evaluate_xtrio(s, f))
    throw InternalError("witness history does not satisfy the formula");
  out.structure = std::move(s);
  return out;
}

}  // namespace xtrio
