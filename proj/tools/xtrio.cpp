#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "xtrio/xtrio.hpp"

namespace {

using json = nlohmann::json;
using namespace xtrio;

// Exit codes shared by every subcommand.
constexpr int kOk = 0;
constexpr int kFound = 1;
constexpr int kInconclusive = 2;
constexpr int kUsage = 3;

struct Options {
  std::string formula_path, structure_path, model_path, property_path, output_path, dimacs_path;
  std::string target, solver = "embedded", solver_cmd, kind, components;
  std::size_t bound = 70;
  std::size_t pos = 0;
  bool gap = false;
  bool strict = false;
  bool json = false;
  unsigned long max_l = 40;
  std::optional<unsigned long> within;
};

std::string slurp(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot read " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void emit(const Options& o, const std::string& text) {
  if (o.output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(o.output_path);
  if (!os) throw Error("cannot write " + o.output_path);
  os << text;
}

SolveOptions solve_options(const Options& o) {
  SolveOptions s;
  if (o.solver == "external") s.backend = Backend::external;
  if (!o.solver_cmd.empty()) {
    s.external_command = o.solver_cmd;
  } else {
    const std::filesystem::path script = std::filesystem::path(XTRIO_SOURCE_DIR) / "tools" / "dimacs_solve.py";
    s.external_command = "python3 '" + script.string() + "'";
  }
  return s;
}

json structure_json(const Structure& s) {
  json steps = json::array();
  for (std::size_t i = 0; i < s.prefix_size() + s.loop_size(); ++i) {
    steps.push_back({{"index", i},
                     {"instant", to_string(s.instant(i))},
                     {"kind", to_string(s.kind(i))},
                     {"label", s.label(i)}});
  }
  return {{"prefix", s.prefix_size()}, {"loop", s.loop_size()}, {"zeno", s.zeno()}, {"steps", steps}};
}

std::string structure_text(const Structure& s) {
  std::ostringstream os;
  os << "prefix " << s.prefix_size() << "\nloop " << s.loop_size() << "\n";
  for (std::size_t i = 0; i < s.prefix_size() + s.loop_size(); ++i) {
    os << i << ": " << to_string(s.kind(i)) << " @" << to_string(s.instant(i));
    for (const auto& a : s.label(i)) os << ' ' << a;
    os << '\n';
  }
  return os.str();
}

// Prints a checked witness (the check re-evaluates it under both semantics
// before returning) together with the verdict line.
int report(const Options& o, const std::string& command, const XtrioVerdict& v, const std::string& found_line,
           const std::string& clear_line, bool found_is_success) {
  if (o.json) {
    json j{{"command", command}, {"bound", v.bound}, {"found", v.sat}, {"message", v.sat ? found_line : clear_line}};
    if (v.sat) {
      j["witness"] = structure_json(*v.structure);
      j["trace"] = render_trace(*v.trace);
    }
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << (v.sat ? found_line : clear_line) << '\n';
    if (v.sat) std::cout << structure_text(*v.structure);
  }
  if (v.sat) return found_is_success ? kOk : kFound;
  return found_is_success ? kFound : kOk;
}

int cmd_translate(const Options& o) {
  const Formula f = parse_formula(slurp(o.formula_path));
  const LtlFormula t = translate_with_axioms(f, TranslationOptions{o.strict});
  if (o.json) {
    emit(o, json{{"command", "translate"}, {"ltl", render_ltl(t)}, {"dag_size", dag_size(t)}}.dump(2) + "\n");
  } else {
    emit(o, render_ltl(t) + "\n");
  }
  return kOk;
}

int cmd_sat(const Options& o) {
  const Formula f = parse_formula(slurp(o.formula_path));
  const TranslationOptions topts{o.strict};
  if (!o.dimacs_path.empty()) {
    std::ofstream os(o.dimacs_path);
    if (!os) throw Error("cannot write " + o.dimacs_path);
    export_dimacs(encode(translate_with_axioms(f, topts), o.bound), os);
  }
  const XtrioVerdict v = check_xtrio(f, o.bound, solve_options(o), topts);
  const std::string k = std::to_string(o.bound);
  return report(o, "sat", v, "sat at bound " + k, "unsat up to " + k, true);
}

int cmd_eval(const Options& o) {
  const Formula f = parse_formula(slurp(o.formula_path));
  const Structure s = parse_structure(slurp(o.structure_path));
  const EvalPosition at{o.pos, o.gap ? Phase::gap : Phase::history};
  const bool value = evaluate_xtrio(s, f, at);
  if (o.json) std::cout << json{{"command", "eval"}, {"value", value}}.dump(2) << '\n';
  else std::cout << (value ? "true" : "false") << '\n';
  return value ? kOk : kFound;
}

int cmd_compile(const Options& o) {
  const SfSystem sys = parse_system(slurp(o.model_path));
  const Formula f = compile_system(sys);
  if (o.json) emit(o, json{{"command", "compile"}, {"formula", render_formula(f)}, {"size", tree_size(f)}}.dump(2) + "\n");
  else emit(o, render_formula(f) + "\n");
  return kOk;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string x; std::getline(ss, x, ',');)
    if (!x.empty()) out.push_back(x);
  return out;
}

int check_absent(const Options& o, const std::string& command, const SfSystem& sys, const Formula& bad,
                 const std::string& what) {
  const Formula f = conj(compile_system(sys), bad);
  const XtrioVerdict v = check_xtrio(f, o.bound, solve_options(o));
  const std::string k = std::to_string(o.bound);
  return report(o, command, v, what + " found at bound " + k, "no " + what + " up to bound " + k, false);
}

int cmd_zeno(const Options& o) {
  return check_absent(o, "zeno", parse_system(slurp(o.model_path)), zeno_property(), "Zeno runs");
}

int cmd_deadlock(const Options& o) {
  const SfSystem sys = parse_system(slurp(o.model_path));
  PropertySpec p;
  p.kind = PropertyKind::deadlock;
  p.components = split_list(o.components);
  return check_absent(o, "deadlock", sys, build_property(p, sys), "deadlock");
}

int cmd_verify(const Options& o) {
  const SfSystem sys = parse_system(slurp(o.model_path));
  if (o.kind == "zeno") return check_absent(o, "verify", sys, zeno_property(), "Zeno runs");
  if (o.kind == "deadlock") {
    PropertySpec p;
    p.kind = PropertyKind::deadlock;
    p.components = split_list(o.components);
    return check_absent(o, "verify", sys, build_property(p, sys), "deadlock");
  }
  PropertySpec p;
  if (!o.property_path.empty()) {
    if (o.within) throw ValidationError("give either -p or --within, not both");
    p.kind = PropertyKind::custom;
    p.target = parse_formula(slurp(o.property_path));
  } else if (o.within) {
    if (o.target.empty()) throw ValidationError("--within needs --target");
    p.kind = PropertyKind::within_stable;
    p.target = parse_formula(o.target);
    p.bound = *o.within;
  } else {
    throw ValidationError("verify needs -p, --within or --kind");
  }
  const Formula prop = build_property(p, sys);
  const XtrioVerdict v = check_xtrio(conj(compile_system(sys), neg(prop)), o.bound, solve_options(o));
  const std::string k = std::to_string(o.bound);
  return report(o, "verify", v, "counterexample at bound " + k, "holds up to " + k, false);
}

int cmd_minl(const Options& o) {
  const SfSystem sys = parse_system(slurp(o.model_path));
  const Formula target = parse_formula(o.target);
  const MinLResult r = min_l_search(sys, target, o.max_l, o.bound, solve_options(o));
  if (o.json) {
    json probes = json::array();
    for (const auto& [l, holds] : r.probes) probes.push_back({{"L", l}, {"holds", holds}});
    json j{{"command", "minl"}, {"bound", o.bound}, {"max", o.max_l}, {"probes", probes}};
    j["L"] = r.value ? json(*r.value) : json(nullptr);
    std::cout << j.dump(2) << '\n';
  } else if (r.value) {
    std::cout << "L* = " << *r.value << " (bound " << o.bound << ")\n";
  } else {
    std::cout << "no L <= " << o.max_l << " holds up to bound " << o.bound << '\n';
  }
  return r.value ? kOk : kInconclusive;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounded satisfiability and model checking for X-TRIO_N"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* c) {
    c->add_flag("--json", o.json, "Machine-readable output");
  };
  auto solving = [&](CLI::App* c) {
    c->add_option("-k,--bound", o.bound, "Bound (last trace position)")->check(CLI::PositiveNumber);
    c->add_option("--solver", o.solver, "SAT backend")->check(CLI::IsMember({"embedded", "external"}));
    c->add_option("--solver-cmd", o.solver_cmd, "Command for the external backend");
  };

  auto* translate = app.add_subcommand("translate", "Print gamma(F) && axioms");
  translate->add_option("-f,--formula", o.formula_path, "Formula file (.xt)")->required()->check(CLI::ExistingFile);
  translate->add_flag("--strict-paper", o.strict, "Use the table rules verbatim");
  translate->add_option("-o,--output", o.output_path, "Output file (.ltl)");
  common(translate);

  auto* sat = app.add_subcommand("sat", "Bounded satisfiability; exit 0 if sat, 1 if unsat up to K");
  sat->add_option("-f,--formula", o.formula_path, "Formula file (.xt)")->required()->check(CLI::ExistingFile);
  sat->add_option("--dimacs", o.dimacs_path, "Also write the CNF here");
  sat->add_flag("--strict-paper", o.strict, "Use the table rules verbatim");
  solving(sat);
  common(sat);

  auto* eval = app.add_subcommand("eval", "Evaluate a formula on a structure; exit 0 if true, 1 if false");
  eval->add_option("-f,--formula", o.formula_path, "Formula file (.xt)")->required()->check(CLI::ExistingFile);
  eval->add_option("-t,--structure", o.structure_path, "Structure file (.xtr)")->required()->check(CLI::ExistingFile);
  eval->add_option("--pos", o.pos, "History index");
  eval->add_flag("--gap", o.gap, "Evaluate in the gap after the history point");
  common(eval);

  auto* compile = app.add_subcommand("compile", "Print the system formula of a model");
  compile->add_option("-m,--model", o.model_path, "Model file (.sfm)")->required()->check(CLI::ExistingFile);
  compile->add_option("-o,--output", o.output_path, "Output file (.xt)");
  common(compile);

  auto* verify = app.add_subcommand("verify", "Check a property; exit 0 if it holds up to K, 1 on a counterexample");
  verify->add_option("-m,--model", o.model_path, "Model file (.sfm)")->required()->check(CLI::ExistingFile);
  verify->add_option("-p,--property", o.property_path, "Property file (.xt)")->check(CLI::ExistingFile);
  verify->add_option("--kind", o.kind, "Built-in property")->check(CLI::IsMember({"zeno", "deadlock"}));
  verify->add_option("--within", o.within, "Within_stable bound L (with --target)");
  verify->add_option("--target", o.target, "Target expression");
  verify->add_option("--components", o.components, "Comma-separated components for --kind deadlock");
  solving(verify);
  common(verify);

  auto* zeno = app.add_subcommand("zeno", "Search for Zeno runs; exit 0 if none up to K, 1 otherwise");
  zeno->add_option("-m,--model", o.model_path, "Model file (.sfm)")->required()->check(CLI::ExistingFile);
  solving(zeno);
  common(zeno);

  auto* deadlock = app.add_subcommand("deadlock", "Search for deadlocks; exit 0 if none up to K, 1 otherwise");
  deadlock->add_option("-m,--model", o.model_path, "Model file (.sfm)")->required()->check(CLI::ExistingFile);
  deadlock->add_option("--components", o.components, "Comma-separated components (default: all)");
  solving(deadlock);
  common(deadlock);

  auto* minl = app.add_subcommand("minl", "Smallest Within_stable bound; exit 0 if found, 2 if none <= max");
  minl->add_option("-m,--model", o.model_path, "Model file (.sfm)")->required()->check(CLI::ExistingFile);
  minl->add_option("--target", o.target, "Target expression")->required();
  minl->add_option("--max", o.max_l, "Largest L to try");
  minl->add_option("--bound", o.bound, "Bound K")->check(CLI::PositiveNumber);
  minl->add_option("--solver", o.solver, "SAT backend")->check(CLI::IsMember({"embedded", "external"}));
  minl->add_option("--solver-cmd", o.solver_cmd, "Command for the external backend");
  common(minl);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*translate) return cmd_translate(o);
    if (*sat) return cmd_sat(o);
    if (*eval) return cmd_eval(o);
    if (*compile) return cmd_compile(o);
    if (*verify) return cmd_verify(o);
    if (*zeno) return cmd_zeno(o);
    if (*deadlock) return cmd_deadlock(o);
    if (*minl) return cmd_minl(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
