#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "support.hpp"
#include "xtrio/xtrio.hpp"

using namespace xtrio;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string model(const std::string& name) {
  return test_support::slurp(std::string(XTRIO_SOURCE_DIR) + "/models/" + name);
}

SolveOptions external_solver() {
  SolveOptions o;
  o.backend = Backend::external;
  o.external_command = "python3 '" XTRIO_SOURCE_DIR "/tools/dimacs_solve.py'";
  return o;
}

Outcome equivalence() {
  const std::vector<std::string> atoms{"p", "q", "r"};
  std::size_t agree = 0, zeno = 0;
  const std::size_t total = 10000;
  std::string first_bad;
  for (std::uint64_t seed = 0; seed < total; ++seed) {
    Rng rng(seed * 2654435761u + 17);
    const std::size_t n_atoms = rng.between(1, 3);
    const std::vector<std::string> use(atoms.begin(), atoms.begin() + static_cast<long>(n_atoms));
    const Formula f = test_support::random_formula(rng, 5, use);
    const Structure s = random_structure(seed + 1000003, 8, use);
    if (s.zeno()) ++zeno;
    const bool want = evaluate_xtrio(s, f);
    const bool got = eval_pltlb(flatten(s), ltl::conj(gamma(f), axioms(use)), 0);
    if (want == got) ++agree;
    else if (first_bad.empty()) first_bad = render_formula(f) + " on " + render_structure(s);
  }
  std::ostringstream os;
  os << agree << "/" << total << " agree (" << zeno << " Zeno structures)";
  if (!first_bad.empty()) os << "; first mismatch: " << first_bad;
  return {agree == total, os.str()};
}

Outcome stuttering() {
  const std::vector<std::string> atoms{"p", "q", "r"};
  std::size_t agree = 0, drawn = 0;
  Rng rng(77);
  std::uint64_t seed = 0;
  while (drawn < 2000) {
    const Structure s = random_structure(seed++, 8, atoms);
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < s.prefix_size() + 2 * s.loop_size() + 1; ++i)
      if (!s.is_standard(i) && s.kind(i) == StepKind::macro) candidates.push_back(i);
    if (candidates.empty()) continue;
    const Formula f = test_support::random_formula(rng, 5, atoms);
    const std::size_t i = candidates[rng.below(candidates.size())];
    XtrioEvaluator ev(s);
    ++drawn;
    if (ev.eval(f, {i, Phase::history}) == ev.eval(f, {i, Phase::gap})) ++agree;
  }
  return {agree == drawn, std::to_string(agree) + "/" + std::to_string(drawn) + " triples agree"};
}

Outcome round_trip() {
  const std::vector<std::string> atoms{"p", "q"};
  std::size_t ok = 0, axioms_ok = 0;
  const std::size_t total = 1000;
  for (std::uint64_t seed = 0; seed < total; ++seed) {
    const Structure s = canonicalize(random_structure(seed + 424242, 8, atoms));
    const LassoTrace t = flatten(s);
    if (eval_pltlb(t, axioms(atoms), 0)) ++axioms_ok;
    try {
      if (unflatten(t) == s) ++ok;
    } catch (const Error&) {
    }
  }
  return {ok == total && axioms_ok == total,
          std::to_string(ok) + "/" + std::to_string(total) + " round trips, " + std::to_string(axioms_ok) + "/" +
              std::to_string(total) + " satisfy A1 && A2"};
}

Outcome bmc_cross_validation() {
  const std::vector<std::string> atoms{"p", "q"};
  const auto corpus = test_support::ltl_corpus();
  std::size_t checks = 0, agree = 0, ext_agree = 0, witnesses = 0;
  for (const auto& text : corpus) {
    const LtlFormula f = parse_ltl(text);
    for (std::size_t k = 1; k <= 4; ++k) {
      ++checks;
      const Verdict v = check_bounded(f, k);
      if (v.sat == test_support::brute_force_sat(f, k, atoms)) ++agree;
      if (v.sat && eval_pltlb(*v.witness, f, 0)) ++witnesses;
      const Verdict e = check_bounded(f, k, external_solver());
      if (e.sat == v.sat) ++ext_agree;
    }
  }
  std::ostringstream os;
  os << corpus.size() << " formulas, " << agree << "/" << checks << " agree with enumeration, " << ext_agree << "/"
     << checks << " agree with the external solver, " << witnesses << " witnesses re-validated";
  return {corpus.size() >= 50 && agree == checks && ext_agree == checks, os.str()};
}

Outcome zeno_detection() {
  const SfSystem sys = parse_system(model("robot_cell.sfm"));
  const XtrioVerdict shipped = check_xtrio(conj(compile_system(sys), zeno_property()), 70);
  const SfSystem mutant = parse_system(model("robot_cell_zeno.sfm"));
  const XtrioVerdict bad = check_xtrio(conj(compile_system(mutant), zeno_property()), 70);
  bool loop_non_standard = false;
  if (bad.sat) {
    loop_non_standard = bad.structure->zeno();
    for (const auto& lab : bad.trace->loop) loop_non_standard = loop_non_standard && !lab.count(kST);
  }
  std::ostringstream os;
  os << "robot cell " << (shipped.sat ? "has a Zeno run" : "unsat up to 70") << ", self-loop mutant "
     << (bad.sat ? "sat" : "unsat");
  if (bad.sat) os << " with " << (loop_non_standard ? "an all non-standard loop" : "a loop containing standard positions");
  return {!shipped.sat && bad.sat && loop_non_standard, os.str()};
}

Outcome deadlock() {
  const SfSystem sys = parse_system(model("robot_cell.sfm"));
  const XtrioVerdict shipped = check_xtrio(conj(compile_system(sys), deadlock_property(sys)), 40);
  const SfSystem broken = parse_system(model("robot_cell_broken.sfm"));
  const XtrioVerdict bad = check_xtrio(conj(compile_system(broken), deadlock_property(broken)), 40);
  std::ostringstream os;
  os << "robot cell " << (shipped.sat ? "deadlocks" : "deadlock-free up to 40") << ", broken handshake "
     << (bad.sat ? "deadlocks" : "shows no deadlock");
  return {!shipped.sat && bad.sat, os.str()};
}

// Pinned from an exhaustive scan of L = 0..10 at k = 40 and k = 70.
constexpr unsigned long kGoldenL = 5;

Outcome reachability() {
  const SfSystem sys = parse_system(model("robot_cell.sfm"));
  const Formula target = parse_formula("s_Rob=GoToCo1 || s_Rob=GoToCo2");
  const MinLResult at40 = min_l_search(sys, target, 40, 40);
  const MinLResult at70 = min_l_search(sys, target, 40, 70);
  const Formula f = compile_system(sys);
  const bool around = within_holds(f, target, kGoldenL, 40) && within_holds(f, target, kGoldenL + 1, 40) &&
                      within_holds(f, target, kGoldenL + 5, 40) && !within_holds(f, target, kGoldenL - 1, 40);
  auto show = [](const MinLResult& r) { return r.value ? std::to_string(*r.value) : std::string("none"); };
  std::ostringstream os;
  os << "L* = " << show(at40) << " at k=40, " << show(at70) << " at k=70 (golden " << kGoldenL << "); L*-1, L*, L*+1, L*+5 "
     << (around ? "as expected" : "inconsistent");
  return {at40.value == kGoldenL && at70.value == kGoldenL && around, os.str()};
}

Outcome counter_gadget() {
  using enum CounterOp;
  CounterScript script;
  for (CounterOp op : {inc, inc, dec, dec}) script.instrs.push_back({Parity::even, op});
  const XtrioVerdict v = check_xtrio(counter_run(script), 30);
  if (!v.sat) return {false, "counter_axioms && inc,inc,dec,dec is unsat up to 30"};
  const std::vector<std::size_t> want{0, 1, 2, 1, 0};
  const auto got = even_a_lengths(*v.structure, want.size());
  bool formed = true;
  for (const auto& b : counter_blocks(*v.structure, 2 * want.size())) formed = formed && b.well_formed;
  std::ostringstream os;
  os << "even A-block lengths";
  for (auto n : got) os << ' ' << n;
  os << (formed ? ", blocks well formed" : ", malformed blocks");
  return {got == want && formed, os.str()};
}

Outcome translation_size() {
  std::vector<std::size_t> in, out;
  Formula f = atom("p");
  for (int d = 1; d <= 10; ++d) {
    f = since(f, conj(atom("q"), f));
    in.push_back(postorder(f).size());
    out.push_back(dag_size(gamma(f)));
  }
  bool linear = true;
  double worst = 0;
  for (std::size_t i = 0; i < in.size(); ++i) {
    worst = std::max(worst, static_cast<double>(out[i]) / static_cast<double>(in[i]));
    if (i >= 2 && out[i] - out[i - 1] != out[i - 1] - out[i - 2]) linear = false;
  }
  std::ostringstream os;
  os << "gamma nodes";
  for (auto n : out) os << ' ' << n;
  os << "; max ratio to input " << worst;
  return {linear && worst <= 10, os.str()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  std::vector<int> only;
  app.add_option("--only", only, "Run only the listed criteria")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"translation equivalence", equivalence},
      {"stuttering below a standard successor", stuttering},
      {"flatten/unflatten round trip", round_trip},
      {"BMC cross-validation", bmc_cross_validation},
      {"Zeno detection", zeno_detection},
      {"deadlock detection", deadlock},
      {"bounded reachability", reachability},
      {"counter gadget", counter_gadget},
      {"translation size", translation_size},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %d %s: %s: %s (%.1fs)\n", id, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
