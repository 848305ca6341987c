#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <unistd.h>

#include "xtrio/dimacs.hpp"
#include "xtrio/error.hpp"
#include "xtrio/ltl.hpp"
#include "xtrio/ltl_eval.hpp"
#include "xtrio/sat.hpp"

namespace xtrio {

/// Propositional unrolling of a PLTLB formula over lasso traces with
/// positions 0..k whose last position loops back to a selected l in 0..k.
///
/// Past operators are handled exactly: a subformula with past depth d gets
/// d+1 copies of its position variables, copy c standing for the c-th
/// traversal of the loop. Past values are constant from copy d on, so a
/// reference to a deeper copy reads copy d.
struct CnfSystem {
  Cnf cnf;
  std::size_t bound = 0;
  /// Atom name -> variable per position 0..k.
  std::map<std::string, std::vector<int>> atom_vars;
  /// selector_vars[l] is true iff position k is followed by position l.
  std::vector<int> selector_vars;
  /// Literal of the root formula at position 0.
  int root = 0;
};

namespace detail {

class BmcEncoder {
 public:
  BmcEncoder(const LtlFormula& f, std::size_t k) : k_(k) {
    if (k < 1) throw ValidationError("bound k must be at least 1");
    nodes_ = postorder(f);
    for (std::size_t n = 0; n < nodes_.size(); ++n) index_[nodes_[n].id()] = n;
    depth_.resize(nodes_.size());
    for (std::size_t n = 0; n < nodes_.size(); ++n) {
      const LtlFormula& g = nodes_[n];
      std::size_t d = 0;
      if (arity(g.op()) >= 1) d = depth_[child(g, 0)];
      if (arity(g.op()) == 2) d = std::max(d, depth_[child(g, 1)]);
      if (g.op() == LOp::Yesterday || g.op() == LOp::Since) ++d;
      depth_[n] = d;
    }
  }

  CnfSystem run() {
    true_lit_ = fresh();
    clause({true_lit_});

    for (std::size_t l = 0; l <= k_; ++l) {
      const int s = fresh();
      sys_.selector_vars.push_back(s);
      sys_.cnf.comments.emplace_back("loop@" + std::to_string(l), s);
    }
    clause(std::vector<int>(sys_.selector_vars.begin(), sys_.selector_vars.end()));
    for (std::size_t a = 0; a <= k_; ++a)
      for (std::size_t b = a + 1; b <= k_; ++b) clause({-sys_.selector_vars[a], -sys_.selector_vars[b]});

    lits_.resize(nodes_.size());
    for (std::size_t n = 0; n < nodes_.size(); ++n) encode_node(n);
    sys_.root = ref(nodes_.size() - 1, 0, 0);
    sys_.cnf.comments.emplace_back("root", std::abs(sys_.root));
    clause({sys_.root});
    sys_.bound = k_;
    return std::move(sys_);
  }

 private:
  std::size_t child(const LtlFormula& g, int which) const {
    return index_.at(which == 0 ? g.lhs().id() : g.rhs().id());
  }

  int fresh() { return ++sys_.cnf.num_vars; }
  void clause(std::vector<int> c) { sys_.cnf.clauses.push_back(std::move(c)); }

  int ref(std::size_t n, std::size_t copy, std::size_t i) const {
    return lits_[n][std::min(copy, depth_[n])][i];
  }

  // Tseitin definitions, interned structurally.
  int def_and(int a, int b) {
    if (a == -true_lit_ || b == -true_lit_) return -true_lit_;
    if (a == true_lit_) return b;
    if (b == true_lit_) return a;
    if (a == b) return a;
    if (a == -b) return -true_lit_;
    if (a > b) std::swap(a, b);
    const auto key = std::array<int, 3>{0, a, b};
    if (auto it = interned_.find(key); it != interned_.end()) return it->second;
    const int v = fresh();
    clause({-v, a});
    clause({-v, b});
    clause({v, -a, -b});
    interned_.emplace(key, v);
    return v;
  }
  int def_or(int a, int b) { return -def_and(-a, -b); }
  int def_ite(int s, int a, int b) {
    if (s == true_lit_) return a;
    if (s == -true_lit_) return b;
    if (a == b) return a;
    const auto key = std::array<int, 3>{s, a, b};
    if (auto it = interned_.find(key); it != interned_.end()) return it->second;
    const int v = fresh();
    clause({-v, -s, a});
    clause({-v, s, b});
    clause({v, -s, -a});
    clause({v, s, -b});
    clause({-v, a, b});
    clause({v, -a, -b});
    interned_.emplace(key, v);
    return v;
  }
  /// v <-> x where v is a fresh variable reserved in advance.
  void bind(int v, int x) {
    clause({-v, x});
    clause({v, -x});
  }

  // OR over l of (sel_l && value(l)).
  template <class F>
  int loop_choice(F value) {
    int acc = -true_lit_;
    for (std::size_t l = 0; l <= k_; ++l) acc = def_or(acc, def_and(sys_.selector_vars[l], value(l)));
    return acc;
  }

  void encode_node(std::size_t n) {
    const LtlFormula& g = nodes_[n];
    const std::size_t copies = depth_[n] + 1;
    auto& out = lits_[n];
    out.assign(copies, std::vector<int>(k_ + 1, 0));
    switch (g.op()) {
      case LOp::True:
        for (auto& row : out) std::fill(row.begin(), row.end(), true_lit_);
        return;
      case LOp::Atom: {
        auto& vars = sys_.atom_vars[g.name()];
        if (vars.empty()) {
          for (std::size_t i = 0; i <= k_; ++i) {
            vars.push_back(fresh());
            sys_.cnf.comments.emplace_back(g.name() + "@" + std::to_string(i), vars.back());
          }
        }
        out[0] = vars;
        return;
      }
      case LOp::Not: {
        const std::size_t a = child(g, 0);
        for (std::size_t c = 0; c < copies; ++c)
          for (std::size_t i = 0; i <= k_; ++i) out[c][i] = -ref(a, c, i);
        return;
      }
      case LOp::And: {
        const std::size_t a = child(g, 0), b = child(g, 1);
        for (std::size_t c = 0; c < copies; ++c)
          for (std::size_t i = 0; i <= k_; ++i) out[c][i] = def_and(ref(a, c, i), ref(b, c, i));
        return;
      }
      case LOp::Next: {
        const std::size_t a = child(g, 0);
        for (std::size_t c = 0; c < copies; ++c) {
          for (std::size_t i = 0; i < k_; ++i) out[c][i] = ref(a, c, i + 1);
          out[c][k_] = loop_choice([&](std::size_t l) { return ref(a, c + 1, l); });
        }
        return;
      }
      case LOp::Until: {
        const std::size_t a = child(g, 0), b = child(g, 1);
        for (std::size_t c = 0; c < copies; ++c)
          for (std::size_t i = 0; i <= k_; ++i) out[c][i] = fresh();
        for (std::size_t c = 0; c < copies; ++c) {
          for (std::size_t i = 0; i < k_; ++i)
            bind(out[c][i], def_or(ref(b, c, i), def_and(ref(a, c, i), out[c][i + 1])));
          int succ;
          if (c + 1 < copies) {
            succ = loop_choice([&](std::size_t l) { return out[c + 1][l]; });
          } else {
            // Last copy: least fixpoint over one traversal of the loop.
            std::vector<int> aux(k_ + 1);
            aux[k_] = ref(b, c, k_);
            for (std::size_t i = k_; i-- > 0;) aux[i] = def_or(ref(b, c, i), def_and(ref(a, c, i), aux[i + 1]));
            succ = loop_choice([&](std::size_t l) { return aux[l]; });
          }
          bind(out[c][k_], def_or(ref(b, c, k_), def_and(ref(a, c, k_), succ)));
        }
        return;
      }
      case LOp::Yesterday: {
        const std::size_t a = child(g, 0);
        for (std::size_t c = 0; c < copies; ++c) {
          for (std::size_t i = 0; i <= k_; ++i) {
            const int within = i > 0 ? ref(a, c, i - 1) : -true_lit_;
            out[c][i] = c == 0 ? within : def_ite(sys_.selector_vars[i], ref(a, c - 1, k_), within);
          }
        }
        return;
      }
      case LOp::Since: {
        const std::size_t a = child(g, 0), b = child(g, 1);
        for (std::size_t c = 0; c < copies; ++c) {
          for (std::size_t i = 0; i <= k_; ++i) {
            const int within = i > 0 ? out[c][i - 1] : -true_lit_;
            const int before = c == 0 ? within : def_ite(sys_.selector_vars[i], out[c - 1][k_], within);
            out[c][i] = def_or(ref(b, c, i), def_and(ref(a, c, i), before));
          }
        }
        return;
      }
    }
    throw InternalError("unknown PLTLB operator");
  }

  struct KeyHash {
    std::size_t operator()(const std::array<int, 3>& k) const noexcept {
      std::size_t h = 1469598103934665603ull;
      for (int x : k) h = (h ^ static_cast<std::size_t>(static_cast<unsigned>(x))) * 1099511628211ull;
      return h;
    }
  };

  std::size_t k_;
  std::vector<LtlFormula> nodes_;
  std::unordered_map<const void*, std::size_t> index_;
  std::vector<std::size_t> depth_;
  std::vector<std::vector<std::vector<int>>> lits_;
  std::unordered_map<std::array<int, 3>, int, KeyHash> interned_;
  int true_lit_ = 0;
  CnfSystem sys_;
};

}  // namespace detail

inline CnfSystem encode(const LtlFormula& f, std::size_t k) { return detail::BmcEncoder(f, k).run(); }

enum class Backend { embedded, external };

struct SolveOptions {
  Backend backend = Backend::embedded;
  /// Command for the external backend; receives the DIMACS file path as its
  /// last argument and must print "s SATISFIABLE"/"s UNSATISFIABLE" and, on
  /// sat, "v" lines with the model.
  std::string external_command = "python3 tools/dimacs_solve.py";
};

struct Assignment {
  bool sat = false;
  std::vector<bool> model;  // index 0 unused
};

inline Assignment solve_external(const Cnf& cnf, const std::string& command) {
  namespace fs = std::filesystem;
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path();
  const std::string stem = "xtrio_" + std::to_string(::getpid()) + "_" + std::to_string(counter++);
  const fs::path in = dir / (stem + ".cnf"), out = dir / (stem + ".out");
  {
    std::ofstream os(in);
    write_dimacs(os, cnf);
  }
  const std::string cmd = command + " '" + in.string() + "' > '" + out.string() + "'";
  const int rc = std::system(cmd.c_str());
  std::ifstream is(out);
  Assignment a;
  a.model.assign(static_cast<std::size_t>(cnf.num_vars) + 1, false);
  bool answered = false;
  for (std::string line; std::getline(is, line);) {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "s") {
      std::string word;
      ls >> word;
      answered = true;
      a.sat = word == "SATISFIABLE";
    } else if (tag == "v") {
      for (long x; ls >> x;)
        if (x > 0 && x <= cnf.num_vars) a.model[static_cast<std::size_t>(x)] = true;
    }
  }
  fs::remove(in);
  fs::remove(out);
  if (!answered) throw Error("external solver failed (exit status " + std::to_string(rc) + "): " + command);
  return a;
}

inline Assignment solve(const CnfSystem& c, const SolveOptions& opts = {}) {
  if (opts.backend == Backend::external) return solve_external(c.cnf, opts.external_command);
  Assignment a;
  a.sat = solve_cnf(c.cnf, &a.model) == sat::Result::sat;
  return a;
}

inline void export_dimacs(const CnfSystem& c, std::ostream& os) { write_dimacs(os, c.cnf); }

/// Outcome of a bounded check. `sat` carries a witness; otherwise no lasso
/// with at most bound+1 positions satisfies the formula (this is not a proof
/// of unsatisfiability).
struct Verdict {
  bool sat = false;
  std::optional<LassoTrace> witness;
  std::size_t bound = 0;
};

inline LassoTrace decode(const CnfSystem& c, const std::vector<bool>& model) {
  std::optional<std::size_t> loop_start;
  for (std::size_t l = 0; l < c.selector_vars.size(); ++l)
    if (model[static_cast<std::size_t>(c.selector_vars[l])]) loop_start = l;
  if (!loop_start) throw InternalError("model selects no loop position");
  LassoTrace t;
  for (std::size_t i = 0; i <= c.bound; ++i) {
    Label lab;
    for (const auto& [name, vars] : c.atom_vars)
      if (model[static_cast<std::size_t>(vars[i])]) lab.insert(name);
    (i < *loop_start ? t.prefix : t.loop).push_back(std::move(lab));
  }
  return t;
}

/// encode, solve, decode; every witness is re-checked with eval_pltlb.
inline Verdict check_bounded(const LtlFormula& f, std::size_t k, const SolveOptions& opts = {}) {
  const CnfSystem c = encode(f, k);
  const Assignment a = solve(c, opts);
  Verdict v;
  v.bound = k;
  if (!a.sat) return v;
  LassoTrace t = decode(c, a.model);
  if (!eval_pltlb(t, f, 0)) throw InternalError("decoded witness does not satisfy the formula");
  v.sat = true;
  v.witness = std::move(t);
  return v;
}

}  // namespace xtrio
