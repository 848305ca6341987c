#pragma once

#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "xtrio/error.hpp"
#include "xtrio/sat.hpp"

namespace xtrio {

/// Plain CNF: clauses over variables 1..num_vars in DIMACS literal form.
struct Cnf {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;
  /// Emitted as "c NAME VAR" comment lines.
  std::vector<std::pair<std::string, int>> comments;
};

inline void write_dimacs(std::ostream& os, const Cnf& cnf) {
  for (const auto& [name, v] : cnf.comments) os << "c " << name << ' ' << v << '\n';
  os << "p cnf " << cnf.num_vars << ' ' << cnf.clauses.size() << '\n';
  for (const auto& c : cnf.clauses) {
    for (int l : c) os << l << ' ';
    os << "0\n";
  }
  if (!os) throw Error("failed to write DIMACS output");
}

inline std::string to_dimacs(const Cnf& cnf) {
  std::ostringstream os;
  write_dimacs(os, cnf);
  return os.str();
}

inline Cnf read_dimacs(std::istream& is) {
  Cnf cnf;
  std::string line;
  int line_no = 0;
  bool header = false;
  std::size_t declared = 0;
  std::vector<int> current;
  while (std::getline(is, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "c") continue;
    if (first == "p") {
      std::string fmt;
      if (!(ls >> fmt >> cnf.num_vars >> declared) || fmt != "cnf" || cnf.num_vars < 0)
        throw ParseError("malformed DIMACS header", line_no, 1);
      header = true;
      continue;
    }
    if (!header) throw ParseError("clause before the 'p cnf' header", line_no, 1);
    ls.clear();
    ls.str(line);
    long lit;
    while (ls >> lit) {
      if (lit == 0) {
        cnf.clauses.push_back(std::move(current));
        current.clear();
        continue;
      }
      if (std::labs(lit) > cnf.num_vars) throw ParseError("literal exceeds declared variable count", line_no, 1);
      current.push_back(static_cast<int>(lit));
    }
    if (!ls.eof()) throw ParseError("malformed clause line", line_no, 1);
  }
  if (!header) throw ParseError("missing 'p cnf' header", line_no, 1);
  if (!current.empty()) cnf.clauses.push_back(std::move(current));
  if (cnf.clauses.size() != declared) throw ParseError("clause count differs from header", line_no, 1);
  return cnf;
}

/// Solves a CNF with the embedded solver; on sat, `model[v]` is the value of
/// variable v (index 0 unused).
inline sat::Result solve_cnf(const Cnf& cnf, std::vector<bool>* model = nullptr) {
  sat::Solver s;
  s.reserve_vars(cnf.num_vars);
  for (const auto& c : cnf.clauses) s.add_clause(c);
  const sat::Result r = s.solve();
  if (r == sat::Result::sat && model) {
    model->assign(static_cast<std::size_t>(cnf.num_vars) + 1, false);
    for (int v = 1; v <= cnf.num_vars; ++v) (*model)[static_cast<std::size_t>(v)] = s.model_value(v);
  }
  return r;
}

}  // namespace xtrio
