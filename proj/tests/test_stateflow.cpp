#include <gtest/gtest.h>

#include "support.hpp"
#include "xtrio/check.hpp"
#include "xtrio/formula_io.hpp"
#include "xtrio/stateflow.hpp"

using namespace xtrio;

namespace {

std::string model_path(const std::string& name) { return std::string(XTRIO_SOURCE_DIR) + "/models/" + name; }
SfSystem load(const std::string& name) { return parse_system(test_support::slurp(model_path(name))); }

std::string parse_error(const std::string& text) {
  try {
    parse_system(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

struct Config {
  std::string state;
  std::map<std::string, std::string> vals;
};

Config config_of(const SfModel& m, const Label& lab) {
  Config c;
  int states = 0;
  for (const auto& s : m.states)
    if (lab.count("s_" + m.name + "=" + s.name)) {
      c.state = s.name;
      ++states;
    }
  EXPECT_EQ(states, 1) << m.name;
  for (const auto& v : m.vars) {
    int hits = 0;
    for (const auto& x : v.domain)
      if (lab.count(m.name + "." + v.name + "=" + x)) {
        c.vals[v.name] = x;
        ++hits;
      }
    EXPECT_EQ(hits, 1) << m.name << "." << v.name;
  }
  return c;
}

const SfTransition* enabled(const SfModel& m, const Config& c) {
  for (const auto& t : m.transitions)
    if (t.src == c.state && eval_guard(t.guard, c.vals)) return &t;
  return nullptr;
}

// Replays a witness against the operational reading of the models: macro
// steps exactly at stable points, one transition per model per micro step,
// inputs frozen inside a micro-chain and links sampled at macro steps.
void check_run(const SfSystem& sys, const Structure& s) {
  for (std::size_t i = 0; i < s.prefix_size() + 2 * s.loop_size(); ++i) {
    bool stable = true;
    std::vector<Config> now, next;
    for (const auto& m : sys.models) {
      now.push_back(config_of(m, s.label(i)));
      next.push_back(config_of(m, s.label(i + 1)));
      if (enabled(m, now.back())) stable = false;
    }
    ASSERT_EQ(s.kind(i) == StepKind::macro, stable) << "element " << i;
    for (std::size_t j = 0; j < sys.models.size(); ++j) {
      const SfModel& m = sys.models[j];
      for (const auto& v : m.vars)
        if (v.cls == VarClass::input && !stable) ASSERT_EQ(now[j].vals[v.name], next[j].vals[v.name]) << v.name;
      if (stable) {
        ASSERT_EQ(now[j].state, next[j].state) << m.name << " at " << i;
        continue;
      }
      const SfTransition* t = enabled(m, now[j]);
      if (!t) {
        ASSERT_EQ(now[j].state, next[j].state);
        for (const auto& v : m.vars)
          if (v.cls != VarClass::input) ASSERT_EQ(now[j].vals[v.name], next[j].vals[v.name]);
        continue;
      }
      ASSERT_EQ(next[j].state, t->dst) << m.name << " at " << i;
    }
    if (stable)
      for (const auto& l : sys.links) {
        const auto src = config_of(sys.model(l.src_model), s.label(i)).vals.at(l.src_var);
        const auto dst = config_of(sys.model(l.dst_model), s.label(i + 1)).vals.at(l.dst_var);
        ASSERT_EQ(src, dst) << l.src_model << "." << l.src_var;
      }
  }
}

}  // namespace

TEST(Stateflow, ParseToggle) {
  const SfModel m = parse_model(test_support::slurp(model_path("toggle.sfm")));
  EXPECT_EQ(m.name, "Toggle");
  ASSERT_EQ(m.vars.size(), 2u);
  EXPECT_EQ(m.vars[0].cls, VarClass::input);
  EXPECT_EQ(m.vars[1].domain, (std::vector<std::string>{"false", "true"}));
  EXPECT_EQ(m.states.size(), 2u);
  EXPECT_EQ(m.initial_state, "Off");
  EXPECT_EQ(m.initial_values.at("lamp"), "false");
  ASSERT_EQ(m.transitions.size(), 2u);
  EXPECT_EQ(m.transitions[1].src, "On");
  EXPECT_EQ(m.states[1].entry[0].value, "true");
}

TEST(Stateflow, ParseRobotCell) {
  const SfSystem sys = load("robot_cell.sfm");
  ASSERT_EQ(sys.models.size(), 3u);
  EXPECT_EQ(sys.models[0].name, "Rob");
  EXPECT_EQ(sys.links.size(), 7u);
  EXPECT_NO_THROW(parse_system(test_support::slurp(model_path("robot_cell_broken.sfm"))));
}

TEST(Stateflow, NondeterminismRejected) {
  const std::string msg = parse_error(
      "model M\ninput a : bool\nstate S\nstate T\ninitial S\n"
      "trans S -> T when a = true\ntrans S -> S when a = true || a = false\n");
  EXPECT_NE(msg.find("not deterministic"), std::string::npos) << msg;
  EXPECT_NE(msg.find("lines 6 and 7"), std::string::npos) << msg;
  EXPECT_NE(msg.find("a = true"), std::string::npos) << msg;
}

TEST(Stateflow, InvalidModels) {
  EXPECT_NE(parse_error("model M\ninput a : bool\nstate S\ninitial S\ntrans S -> S do a := true\n")
                .find("assignment to input variable 'a'"),
            std::string::npos);
  EXPECT_NE(parse_error("model M\nstate S { during { } }\ninitial S\n").find("during actions are unsupported"),
            std::string::npos);
  EXPECT_NE(parse_error("model M\noutput o : bool\nstate S\ninitial S\n").find("missing initial value"),
            std::string::npos);
  EXPECT_NE(parse_error("model M\nstate S\ninitial T\n").find("unknown initial state"), std::string::npos);
  EXPECT_NE(parse_error("model M\nlocal x : {a, b}\nstate S\ninitial S with x = c\n").find("not in the domain"),
            std::string::npos);
  EXPECT_NE(parse_error("model M\nstate S\nstate S\ninitial S\n").find("duplicate name"), std::string::npos);
  EXPECT_NE(parse_error("model M\ninput i : bool\noutput o : bool\nstate S\ninitial S with o = true\n"
                        "link M.i -> M.o\n")
                .find("is not an input"),
            std::string::npos);
  EXPECT_NE(parse_error("").find("no model"), std::string::npos);
}

TEST(Stateflow, ParseErrorPosition) {
  try {
    parse_system("model M\nstate S\ninitial S\ntrans S => S\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4);
  }
}

TEST(Stateflow, StableIffTimeAdvances) {
  const SfModel m = parse_model(test_support::slurp(model_path("toggle.sfm")));
  const Formula sys = compile_model(m);
  // Off with go = true must take a micro step; no stable point can have go = true in Off.
  EXPECT_FALSE(check_xtrio(conj(sys, parse_formula("Som(s_Toggle=Off && Toggle.go=true && Xst(true))")), 8).sat);
  EXPECT_TRUE(check_xtrio(conj(sys, parse_formula("Som(s_Toggle=On && Xst(true))")), 8).sat);
  EXPECT_FALSE(check_xtrio(conj(sys, parse_formula("Som(s_Toggle=On && Toggle.lamp=false)")), 8).sat);
}

TEST(Stateflow, AlwaysEnabledSelfLoopIsZeno) {
  const SfModel m = parse_model("model Spin\nstate A\ninitial A\ntrans A -> A\n");
  const Formula sys = compile_model(m);
  const auto v = check_xtrio(conj(sys, zeno_property()), 10);
  ASSERT_TRUE(v.sat);
  EXPECT_TRUE(v.structure->zeno());
  EXPECT_FALSE(check_xtrio(conj(sys, neg(zeno_property())), 10).sat);
}

TEST(Stateflow, NoTransitionsAlternatesStandardAndFiller) {
  const SfModel m = parse_model("model Idle\nlocal x : {a, b}\nstate A\ninitial A with x = b\n");
  const auto v = check_xtrio(compile_model(m), 6);
  ASSERT_TRUE(v.sat);
  for (std::size_t i = 0; i < v.trace->size(); ++i)
    EXPECT_EQ(v.trace->at(i).count(kST) > 0, i % 2 == 0) << render_trace(*v.trace);
  for (const auto& step : v.structure->loop()) {
    EXPECT_EQ(step.kind, StepKind::macro);
    EXPECT_TRUE(step.label.count("Idle.x=b"));
  }
}

TEST(Stateflow, WitnessesFollowOperationalSemantics) {
  for (const char* name : {"toggle.sfm", "robot_cell.sfm", "robot_cell_broken.sfm", "robot_cell_zeno.sfm"}) {
    const SfSystem sys = load(name);
    const auto v = check_xtrio(compile_system(sys), 30);
    ASSERT_TRUE(v.sat) << name;
    check_run(sys, *v.structure);
  }
}

TEST(Stateflow, EntryExitAndTransitionActionOrder) {
  const SfModel m = parse_model(
      "model M\ninput go : bool\nlocal x : {s, e, t, n}\n"
      "state A { exit { x := e } }\nstate B { entry { x := n } }\nstate C\n"
      "initial A with x = s\n"
      "trans A -> B when go = true do x := t\ntrans A -> C when go = false do x := t\n");
  const Formula sys = compile_model(m);
  EXPECT_FALSE(check_xtrio(conj(sys, parse_formula("Som(s_M=B && !M.x=n)")), 6).sat);
  EXPECT_FALSE(check_xtrio(conj(sys, parse_formula("Som(s_M=C && !M.x=t)")), 6).sat);
  EXPECT_TRUE(check_xtrio(conj(sys, parse_formula("Som(s_M=C)")), 6).sat);
}

TEST(Stateflow, PropertyBuilders) {
  const SfSystem sys = load("robot_cell.sfm");
  EXPECT_EQ(build_property({PropertyKind::zeno, {}, 0, {}}, sys), parse_formula("Som(Alw(Xns(true)))"));
  const Formula dl = build_property({PropertyKind::deadlock, {}, 0, {"M2"}}, sys);
  EXPECT_EQ(dl, parse_formula("Som_stable(Alw_stable(s_M2=Idle)) || Som_stable(Alw_stable(s_M2=Busy)) || "
                              "Som_stable(Alw_stable(s_M2=Done))"));
  const Formula target = parse_formula("s_Rob=GoToCo1");
  EXPECT_EQ(build_property({PropertyKind::within_stable, target, 3, {}}, sys), within_stable(target, 3));
  EXPECT_THROW(build_property({PropertyKind::custom, parse_formula("s_Rob=Nowhere"), 0, {}}, sys), ValidationError);
  EXPECT_THROW(build_property({PropertyKind::deadlock, {}, 0, {"M9"}}, sys), ValidationError);
}

TEST(Stateflow, MinLOnSmallModels) {
  const SfModel m = parse_model(test_support::slurp(model_path("toggle.sfm")));
  const auto never = min_l_search(m, parse_formula("s_Toggle=On && Toggle.lamp=false"), 4, 10);
  EXPECT_FALSE(never.value);
  ASSERT_EQ(never.probes.size(), 1u);
  EXPECT_EQ(never.probes[0], (std::pair<unsigned long, bool>{4, false}));
  const auto now = min_l_search(m, parse_formula("s_Toggle=Off || s_Toggle=On"), 4, 10);
  EXPECT_EQ(now.value, 0ul);
}

TEST(Stateflow, MinLCountsStandardInstants) {
  // One step per time unit: T leaves S_i only once the delayed copy of its
  // output says it was already there at the previous instant.
  const SfSystem sys = parse_system(
      "model T\ninput seen : {s0, s1, s2, s3}\noutput at : {s0, s1, s2, s3}\n"
      "state S0 { entry { at := s0 } }\nstate S1 { entry { at := s1 } }\n"
      "state S2 { entry { at := s2 } }\nstate S3 { entry { at := s3 } }\n"
      "initial S0 with at = s0\n"
      "trans S0 -> S1 when seen = s0\ntrans S1 -> S2 when seen = s1\ntrans S2 -> S3 when seen = s2\n"
      "link T.at -> T.seen\n");
  const Formula target = parse_formula("s_T=S3");
  const auto r = min_l_search(sys, target, 8, 20);
  ASSERT_TRUE(r.value);
  // The chains starting at instants 0, 1 and 2 end in S1, S2 and S3.
  EXPECT_EQ(*r.value, 2ul);
  const Formula f = compile_system(sys);
  EXPECT_TRUE(within_holds(f, target, *r.value, 20));
  EXPECT_FALSE(within_holds(f, target, *r.value - 1, 20));
  EXPECT_TRUE(within_holds(f, target, *r.value + 2, 20));
}
