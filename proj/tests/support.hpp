#pragma once

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "xtrio/formula.hpp"
#include "xtrio/ltl.hpp"
#include "xtrio/ltl_eval.hpp"
#include "xtrio/rng.hpp"

namespace xtrio::test_support {

/// Random core formula of depth at most max_depth over the given atoms.
inline Formula random_formula(Rng& rng, int max_depth, const std::vector<std::string>& atoms) {
  if (max_depth <= 1 || rng.chance(1, 5)) {
    const auto pick = rng.below(atoms.size() + 2);
    if (pick == atoms.size()) return truth();
    if (pick == atoms.size() + 1) return now_st();
    return atom(atoms[pick]);
  }
  auto sub = [&] { return random_formula(rng, max_depth - 1, atoms); };
  switch (rng.below(10)) {
    case 0: return neg(sub());
    case 1: return conj(sub(), sub());
    case 2: return dist_next(sub());
    case 3: return dist_prev(sub());
    case 4: return dist_eps(sub());
    case 5: return until(sub(), sub());
    case 6: return since(sub(), sub());
    case 7: return next_st(sub());
    case 8: return next_ns(sub());
    default: return disj(sub(), sub());
  }
}

inline LtlFormula random_ltl(Rng& rng, int max_depth, const std::vector<std::string>& atoms) {
  if (max_depth <= 1 || rng.chance(1, 5)) {
    const auto pick = rng.below(atoms.size() + 1);
    if (pick == atoms.size()) return ltl::truth();
    return ltl::atom(atoms[pick]);
  }
  auto sub = [&] { return random_ltl(rng, max_depth - 1, atoms); };
  switch (rng.below(8)) {
    case 0: return ltl::neg(sub());
    case 1: return ltl::conj(sub(), sub());
    case 2: return ltl::next(sub());
    case 3: return ltl::yesterday(sub());
    case 4: return ltl::until(sub(), sub());
    case 5: return ltl::since(sub(), sub());
    case 6: return ltl::neg(ltl::until(sub(), sub()));
    default: return ltl::disj(sub(), sub());
  }
}

inline LassoTrace random_trace(Rng& rng, std::size_t max_len, const std::vector<std::string>& atoms) {
  const std::size_t total = rng.between(1, max_len);
  const std::size_t loop = rng.between(1, total);
  LassoTrace t;
  for (std::size_t i = 0; i < total; ++i) {
    Label lab;
    for (const auto& a : atoms)
      if (rng.chance(1, 2)) lab.insert(a);
    (i + loop < total ? t.prefix : t.loop).push_back(std::move(lab));
  }
  return t;
}

/// Whether some lasso with exactly k+1 positions satisfies f at 0.
inline bool brute_force_sat(const LtlFormula& f, std::size_t k, const std::vector<std::string>& atoms) {
  const std::size_t n = k + 1, a = atoms.size();
  const std::uint64_t labelings = std::uint64_t{1} << (a * n);
  for (std::size_t l = 0; l < n; ++l) {
    for (std::uint64_t code = 0; code < labelings; ++code) {
      LassoTrace t;
      for (std::size_t i = 0; i < n; ++i) {
        Label lab;
        for (std::size_t j = 0; j < a; ++j)
          if ((code >> (a * i + j)) & 1) lab.insert(atoms[j]);
        (i < l ? t.prefix : t.loop).push_back(std::move(lab));
      }
      if (eval_pltlb(t, f, 0)) return true;
    }
  }
  return false;
}

/// Fixed PLTLB corpus over p and q; every operator appears in several
/// nestings.
inline std::vector<std::string> ltl_corpus() {
  return {
      "p",
      "!p",
      "p && q",
      "p || q",
      "p -> q",
      "p <-> q",
      "p && !p",
      "true",
      "false",
      "XL(p)",
      "XL(XL(p)) && !p",
      "p && XL(!p)",
      "XL(p) && XL(!p)",
      "YL(p)",
      "!YL(true)",
      "XL(YL(p)) && !p",
      "XL(XL(YL(!p))) && XL(p)",
      "UL(p, q)",
      "UL(p, q) && !q",
      "UL(true, p && !q) && !p",
      "!UL(true, !p)",
      "!UL(true, !p) && !UL(true, !q)",
      "!UL(true, !p) && UL(true, !p)",
      "!UL(true, UL(true, p) && !p)",
      "!UL(true, !UL(true, p)) && !UL(true, !UL(true, !p))",
      "UL(p, UL(q, !p))",
      "!UL(p, q) && p",
      "SL(p, q)",
      "XL(XL(SL(p, q))) && !q",
      "XL(SL(!p, q) && !q)",
      "!UL(true, !(q -> YL(p)))",
      "!UL(true, !(p -> YL(!p)))",
      "!UL(true, !(p <-> YL(!p)))",
      "!UL(true, !(q <-> XL(p)))",
      "!UL(true, !(SL(true, q) -> p)) && UL(true, q)",
      "!UL(true, !SL(p, !q)) && UL(true, q)",
      "UL(true, YL(YL(p)) && !p && q)",
      "!UL(true, !(XL(p) <-> !p))",
      "!UL(true, !(XL(p) <-> !p)) && !UL(true, !(XL(q) <-> YL(p)))",
      "!UL(true, !UL(true, p && q)) && !UL(true, !UL(true, !p))",
      "UL(!p, p && XL(!p && XL(p)))",
      "!UL(true, !(p -> XL(XL(!p))))",
      "!UL(true, !(p -> UL(p, q))) && p && !q",
      "SL(q, p) && XL(!p)",
      "!UL(true, !(SL(!q, p) -> !q))",
      "UL(true, SL(p, q) && !p && !q)",
      "UL(true, SL(!p, q) && YL(!q) && q)",
      "!UL(true, !(YL(p) <-> q)) && !UL(true, !(YL(q) <-> !p))",
      "UL(q, p && YL(YL(q)))",
      "!UL(true, !(p <-> UL(true, q))) && !UL(true, !(q -> XL(!q)))",
      "!UL(true, !(p <-> SL(true, q && YL(q))))",
      "XL(XL(XL(p))) && !UL(true, YL(YL(YL(p))))",
      "!UL(true, !UL(p, !p)) && !UL(true, !UL(!p, p))",
      "!(p && q) && UL(p || q, XL(p && q))",
  };
}

inline std::string slurp(const std::string& path) {
  std::ifstream is(path);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace xtrio::test_support
