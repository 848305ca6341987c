#include <gtest/gtest.h>

#include "support.hpp"
#include "xtrio/formula_io.hpp"
#include "xtrio/oracle.hpp"
#include "xtrio/translate.hpp"

using namespace xtrio;

namespace {

HistoryStep micro(Label l = {}) { return {StepKind::micro, std::move(l)}; }
HistoryStep macro(Label l = {}) { return {StepKind::macro, std::move(l)}; }

LtlFormula L(const char* text) { return parse_ltl(text); }

}  // namespace

TEST(Translate, RuleExamples) {
  EXPECT_EQ(gamma(atom("p")), ltl::atom("p"));
  EXPECT_EQ(gamma(parse_formula("Xst(p)")), L("XL(p && ST || FL && XL(p))"));
  EXPECT_EQ(gamma(parse_formula("Xns(p)")), L("XL(p && !ST && !FL)"));
  EXPECT_EQ(gamma(parse_formula("Xns(p)"), {true}), L("XL(p && !ST)"));
  EXPECT_EQ(gamma(parse_formula("Dist(p, eps)")), L("XL(p && !ST) || XL(ST) && p"));
  EXPECT_EQ(gamma(parse_formula("Dist(p, 1)"), {true}), L("XL(UL(!ST, p && ST))"));
  EXPECT_EQ(gamma(parse_formula("Dist(p, 1)")), L("ST && XL(UL(!ST, p && ST))"));
  EXPECT_EQ(gamma(parse_formula("Dist(p, -1)")), L("ST && YL(SL(!ST, ST && p))"));
  EXPECT_EQ(gamma(parse_formula("now_st")), L("ST"));
  EXPECT_EQ(gamma(parse_formula("Until(p, q)")), L("UL(p, q)"));
  const LtlFormula table = L("SL(p, XL(!ST) && q) || SL(p, XL(ST) && p && q)");
  EXPECT_EQ(gamma(parse_formula("Since(p, q)"), {true}), table);
  EXPECT_EQ(gamma(parse_formula("Since(p, q)")), ltl::disj(ltl::atom("q"), table));
}

TEST(Translate, Axioms) {
  const LtlFormula a1 = L("ST && !UL(true, !((ST -> XL(FL || !ST)) && (FL -> YL(ST) && !ST && XL(ST))))");
  EXPECT_EQ(axioms({}), a1);
  EXPECT_EQ(axioms({"p"}), ltl::conj(a1, L("!UL(true, !(FL -> (p <-> YL(p))))")));
  EXPECT_EQ(axioms({"q", "p", "p"}), ltl::conj(a1, L("!UL(true, !(FL -> (p <-> YL(p)) && (q <-> YL(q))))")));
}

TEST(Translate, FlattenAllStandard) {
  const Structure s = build_structure({{"p"}, {}, {macro({"p"})}});
  const LassoTrace t = flatten(s);
  EXPECT_TRUE(t.prefix.empty());
  ASSERT_EQ(t.loop.size(), 2u);
  EXPECT_EQ(t.loop[0], (Label{kST, "p"}));
  EXPECT_EQ(t.loop[1], (Label{kFL, "p"}));
}

TEST(Translate, FlattenMicroStep) {
  const Structure s = build_structure({{"p", "q"}, {micro({"p"}), macro({"q"})}, {macro()}});
  const LassoTrace t = flatten(s);
  EXPECT_EQ(t.at(0), (Label{kST, "p"}));
  EXPECT_EQ(t.at(1), (Label{"q"}));
  EXPECT_EQ(t.at(2), (Label{kST}));
  EXPECT_EQ(t.at(3), (Label{kFL}));
}

TEST(Translate, FlattenZeno) {
  const Structure s = build_structure({{"p"}, {macro({"p"})}, {micro()}});
  const LassoTrace t = flatten(s);
  for (const auto& lab : t.loop) EXPECT_FALSE(lab.count(kST));
}

TEST(Translate, UnflattenErrors) {
  EXPECT_THROW(unflatten(LassoTrace{{}, {{"p"}}}), ValidationError);
  EXPECT_THROW(unflatten(LassoTrace{{{kST, "p"}, {kFL}}, {{kST}, {kFL}}}), ValidationError);
  EXPECT_EQ(axiom_violation(LassoTrace{{{kST, "p"}, {kFL}}, {{kST}, {kFL}}}, {"p"}), 1u);
  EXPECT_FALSE(axiom_violation(LassoTrace{{}, {{kST, "p"}, {kFL, "p"}}}, {"p"}));
}

TEST(Translate, RoundTripAndAxioms) {
  const std::vector<std::string> atoms{"p", "q"};
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const Structure s = canonicalize(random_structure(seed, 8, atoms));
    const LassoTrace t = flatten(s);
    ASSERT_TRUE(eval_pltlb(t, axioms(atoms), 0)) << render_structure(s);
    ASSERT_EQ(unflatten(t), s) << render_structure(s);
  }
}

TEST(Translate, RandomEquivalenceSmoke) {
  const std::vector<std::string> atoms{"p", "q", "r"};
  int bad = 0;
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    Rng rng(seed * 7919 + 1);
    const Formula f = test_support::random_formula(rng, 5, atoms);
    const Structure s = random_structure(seed, 8, atoms);
    const bool want = evaluate_xtrio(s, f);
    const bool got = eval_pltlb(flatten(s), ltl::conj(gamma(f), axioms(atoms)), 0);
    if (want != got && ++bad < 5) ADD_FAILURE() << render_formula(f) << "\n" << render_structure(s);
  }
  EXPECT_EQ(bad, 0);
}

TEST(Translate, EquivalenceAtEveryHistoryPoint) {
  const std::vector<std::string> atoms{"p", "q"};
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Rng rng(seed + 31);
    const Formula f = test_support::random_formula(rng, 4, atoms);
    const Structure s = random_structure(seed, 6, atoms);
    XtrioEvaluator ev(s);
    LtlEvaluator lt(flatten(s));
    const LtlFormula g = gamma(f);
    // Trace position of each history point: fillers follow standard macro points.
    std::size_t pos = 0;
    for (std::size_t i = 0; i < s.prefix_size() + 2 * s.loop_size(); ++i) {
      ASSERT_EQ(ev.eval(f, {i, Phase::history}), lt.eval(g, pos)) << render_formula(f) << "\n" << i;
      pos += s.is_standard(i) && s.kind(i) == StepKind::macro ? 2 : 1;
    }
  }
}

TEST(Translate, LiteralRulesDisagreeWithSemantics) {
  // Xns(p) at a standard point followed by another standard point is false,
  // but the filler in between satisfies p && !ST.
  const Structure s = build_structure({{"p"}, {}, {macro({"p"})}});
  const Formula f = parse_formula("Xns(p)");
  EXPECT_FALSE(evaluate_xtrio(s, f));
  EXPECT_TRUE(eval_pltlb(flatten(s), ltl::conj(gamma(f, {true}), axioms({"p"})), 0));
  EXPECT_FALSE(eval_pltlb(flatten(s), ltl::conj(gamma(f), axioms({"p"})), 0));
}

TEST(Translate, NestedSinceStaysLinear) {
  std::vector<std::size_t> sizes;
  Formula f = atom("p");
  for (int d = 1; d <= 10; ++d) {
    f = since(f, conj(f, atom("q")));
    sizes.push_back(dag_size(gamma(f)));
  }
  for (std::size_t i = 1; i < sizes.size(); ++i) EXPECT_EQ(sizes[i] - sizes[i - 1], sizes[1] - sizes[0]);
}
