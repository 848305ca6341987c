#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xtrio/error.hpp"
#include "xtrio/formula.hpp"

namespace xtrio {

inline Formula som(Formula f) { return until(truth(), std::move(f)); }
inline Formula alw(Formula f) { return neg(som(neg(std::move(f)))); }

inline Formula until_stable(Formula f, Formula g) {
  return until(implies(next_st(truth()), std::move(f)), conj(next_st(truth()), std::move(g)));
}

inline Formula until_st(Formula f, Formula g) {
  return until(implies(now_st(), std::move(f)), conj(now_st(), std::move(g)));
}

inline Formula som_stable(Formula f) { return until_stable(truth(), std::move(f)); }
inline Formula alw_stable(Formula f) { return neg(som_stable(neg(std::move(f)))); }

/// Some macro step starting at a standard instant m <= bound reaches a stable
/// point satisfying f. The disjuncts share their Dist chains.
inline Formula within_stable(Formula f, unsigned long bound) {
  Formula reach = until(next_ns(truth()), conj(next_st(truth()), std::move(f)));
  std::vector<Formula> terms{reach};
  for (unsigned long m = 1; m <= bound; ++m) terms.push_back(dist_next(terms.back()));
  return disj_all(terms);
}

inline bool is_derived_name(std::string_view name) {
  return name == "Som" || name == "Alw" || name == "Until_stable" || name == "Until_st" ||
         name == "Som_stable" || name == "Alw_stable" || name == "Within_stable";
}

/// Number of formula arguments a derived operator takes.
inline int derived_arity(std::string_view name) {
  if (name == "Until_stable" || name == "Until_st") return 2;
  if (is_derived_name(name)) return 1;
  throw ValidationError("unknown derived operator '" + std::string(name) + "'");
}

inline Formula expand_derived(std::string_view name, const std::vector<Formula>& args,
                              std::optional<unsigned long> bound = std::nullopt) {
  const int want = derived_arity(name);
  if (static_cast<int>(args.size()) != want) {
    throw ValidationError(std::string(name) + " takes " + std::to_string(want) + " formula argument(s), got " +
                          std::to_string(args.size()));
  }
  if (name == "Within_stable") {
    if (!bound) throw ValidationError("Within_stable needs a bound");
    return within_stable(args[0], *bound);
  }
  if (bound) throw ValidationError(std::string(name) + " takes no bound");
  if (name == "Som") return som(args[0]);
  if (name == "Alw") return alw(args[0]);
  if (name == "Until_stable") return until_stable(args[0], args[1]);
  if (name == "Until_st") return until_st(args[0], args[1]);
  if (name == "Som_stable") return som_stable(args[0]);
  return alw_stable(args[0]);
}

}  // namespace xtrio
