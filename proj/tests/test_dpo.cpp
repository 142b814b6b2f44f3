#include <gtest/gtest.h>

#include <opensys/laws/suites.hpp>

using namespace opensys;

namespace {

// a=0, b=1, c=2, d=3; loops on b and c
Presheaf two_loop_host() { return make_graph(4, {{1, 1}, {2, 2}, {0, 2}, {1, 2}, {2, 3}}); }
Presheaf two_loop_host_loopless() { return make_graph(4, {{0, 2}, {1, 2}, {2, 3}}); }

} // namespace

TEST(Rule, FineRuleNeedsMonicLegs) {
    auto k = make_graph(2, {});
    auto r = make_graph(1, {});
    EXPECT_THROW(make_rule("x", RuleKind::fine, identity(k), Morphism{k, r, {{}, {0, 0}}}), Error);
    EXPECT_NO_THROW(make_rule("x", RuleKind::bold, identity(k), Morphism{k, r, {{}, {0, 0}}}));
}

TEST(Matches, LoopRuleOnOneLoopHost) {
    auto g = make_graph(3, {{0, 2}, {1, 2}, {2, 2}});
    auto ms = find_matches(loop_rule(), g, false);
    ASSERT_EQ(ms.size(), 1u);
    // brute force: homs l -> g with a complement
    int brute = 0;
    for (const auto& m : oracle::brute_homs(loop_rule().l(), g))
        if (pushout_complement(loop_rule().leg_l, m)) ++brute;
    EXPECT_EQ(brute, 1);
}

TEST(Matches, SingleNodeLeftSide) {
    auto k = make_graph(1, {});
    auto rule = make_rule("id-node", RuleKind::fine, identity(k), identity(k));
    EXPECT_EQ(find_matches(rule, make_graph(3, {{0, 1}}), false).size(), 3u);
}

TEST(Matches, EmptyHost) {
    EXPECT_TRUE(find_matches(loop_rule(), Presheaf(GRAPH()), false).empty());
}

TEST(Apply, LoopRemovalExample) {
    auto g = make_graph(3, {{0, 2}, {1, 2}, {2, 2}});
    auto ms = find_matches(loop_rule(), g, false);
    auto st = apply_rule(loop_rule(), ms.front());
    EXPECT_TRUE(isomorphic(st.h(), make_graph(3, {{0, 2}, {1, 2}})));
    EXPECT_TRUE(isomorphic(st.d(), make_graph(3, {{0, 2}, {1, 2}})));
    EXPECT_TRUE(st.d_to_g.is_mono() && st.d_to_h.is_mono());
    EXPECT_TRUE(oracle::is_pushout_square(loop_rule().leg_l, st.k_to_d, st.match, st.d_to_g));
    EXPECT_TRUE(oracle::is_pushout_square(loop_rule().leg_r, st.k_to_d, st.r_to_h, st.d_to_h));
}

TEST(Apply, IdentityRule) {
    auto l = make_graph(2, {{0, 1}});
    auto rule = make_rule("id", RuleKind::fine, identity(l), identity(l));
    auto g = make_graph(3, {{0, 1}, {1, 2}});
    for (const auto& m : find_matches(rule, g, false)) EXPECT_TRUE(isomorphic(apply_rule(rule, m).h(), g));
}

TEST(Apply, BoldEdgeContraction) {
    auto rule = edge_contraction_rule();
    auto st = apply_rule(rule, find_matches(rule, rule.l(), false).front());
    EXPECT_EQ(node_count(st.h()), 1);
    EXPECT_EQ(edge_count(st.h()), 0);
}

TEST(Apply, GluingViolationReported) {
    // deleting a node that still has an edge
    auto l = make_graph(1, {});
    auto rule = make_rule("del", RuleKind::fine, initial_map(l), identity(Presheaf(GRAPH())));
    auto g = make_graph(2, {{0, 1}});
    Morphism m{l, g, {{}, {0}}};
    try {
        apply_rule(rule, m);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "GluingViolation");
    }
}

TEST(Apply, AmbiguousComplementForNonMonicLeftLeg) {
    // k = two nodes folded onto one node of l = r; any host node gives two
    // non-isomorphic complements (split the node or keep it)
    auto k = make_graph(2, {});
    auto l = make_graph(1, {});
    auto rule = make_rule("fold", RuleKind::bold, Morphism{k, l, {{}, {0, 0}}}, Morphism{k, l, {{}, {0, 0}}});
    auto g = make_graph(1, {{0, 0}});
    Morphism m{l, g, {{}, {0}}};
    auto cs = all_pushout_complements(rule.leg_l, m);
    if (cs.size() > 1) {
        EXPECT_THROW(apply_rule(rule, m), Error);
    } else {
        EXPECT_NO_THROW(apply_rule(rule, m));
    }
}

TEST(OneStep, TwoLoopHost) {
    auto succ = one_step(loop_grammar(), two_loop_host());
    // the loops sit on non-symmetric nodes: two distinct successors
    EXPECT_EQ(succ.size(), 2u);
    auto sym = make_graph(2, {{0, 0}, {1, 1}});
    EXPECT_EQ(one_step(loop_grammar(), sym).size(), 1u);
}

TEST(OneStep, EmptyGrammar) {
    Grammar gr{graph_interface(), {}, false};
    EXPECT_TRUE(one_step(gr, two_loop_host()).empty());
}

TEST(OneStep, HostIsLeftSide) {
    auto succ = one_step(loop_grammar(), loop_rule().l());
    ASSERT_EQ(succ.size(), 1u);
    EXPECT_TRUE(isomorphic(succ.front().h(), loop_rule().r()));
}

TEST(Derive, TwoLoopsRemovedInTwoSteps) {
    auto d = derivation_search(loop_grammar(), two_loop_host(), two_loop_host_loopless(), {2, 1000});
    ASSERT_TRUE(d);
    EXPECT_EQ(d->steps.size(), 2u);
    EXPECT_TRUE(verify_derivation(loop_grammar(), *d));
    EXPECT_TRUE(isomorphic(d->end(), two_loop_host_loopless()));
}

TEST(Derive, Reflexive) {
    auto d = derivation_search(loop_grammar(), two_loop_host(), two_loop_host(), {0, 10});
    ASSERT_TRUE(d);
    EXPECT_TRUE(d->steps.empty());
}

TEST(Derive, LooplessCannotGainLoops) {
    EXPECT_FALSE(derivation_search(loop_grammar(), two_loop_host_loopless(), two_loop_host(), {3, 1000}));
    // exhaustive: nothing reachable has more loops than the start
    for (const auto& [k, x] : reachable(loop_grammar(), two_loop_host_loopless(), 3)) EXPECT_EQ(loop_count(x), 0);
}

TEST(Derive, StepsCarryVerifiedPushouts) {
    auto d = derivation_search(loop_grammar(), two_loop_host(), two_loop_host_loopless(), {2, 1000});
    ASSERT_TRUE(d);
    const Grammar gr = loop_grammar();
    for (const auto& st : d->steps) {
        const Rule& r = gr.rule(st.rule);
        EXPECT_TRUE(oracle::is_pushout_square(r.leg_l, st.k_to_d, st.match, st.d_to_g));
        EXPECT_TRUE(oracle::is_pushout_square(r.leg_r, st.k_to_d, st.r_to_h, st.d_to_h));
    }
}

TEST(Derive, TamperedDerivationFailsVerification) {
    auto d = derivation_search(loop_grammar(), two_loop_host(), two_loop_host_loopless(), {2, 1000});
    ASSERT_TRUE(d);
    auto bad = *d;
    std::swap(bad.steps[0], bad.steps[1]);
    EXPECT_FALSE(verify_derivation(loop_grammar(), bad));
}

TEST(Properties, ComplementUniquenessSmall) {
    auto t = suite::complement_uniqueness({loop_rule(), edge_contraction_rule(), node_deletion_rule()}, 3, 3);
    EXPECT_TRUE(t.tally.ok()) << t.tally.summary();
    EXPECT_GT(t.applied, 0);
    EXPECT_GT(t.rejected, 0);
}

TEST(Properties, FineDerivedSpansAreMonic) {
    for (const auto& g : enumerate_graphs(4, 3))
        for (const auto& rule : {loop_rule(), edge_deletion_rule()})
            for (const auto& m : find_matches(rule, g, false)) {
                auto st = apply_rule(rule, m);
                EXPECT_TRUE(st.d_to_g.is_mono() && st.d_to_h.is_mono());
            }
}

TEST(Properties, AdditivityOfDerivations) {
    Grammar gr{graph_interface(), {loop_rule(), edge_contraction_rule()}, false};
    auto g1 = two_loop_host();
    auto g2 = make_graph(3, {{0, 1}, {1, 2}, {2, 2}});
    auto d1 = derivation_search(gr, g1, two_loop_host_loopless(), {2, 5000});
    auto d2 = derivation_search(gr, g2, make_graph(1, {}), {3, 5000});
    ASSERT_TRUE(d1 && d2);
    auto d = tensor_derivations(gr, *d1, *d2);
    EXPECT_EQ(d.steps.size(), d1->steps.size() + d2->steps.size());
    EXPECT_TRUE(verify_derivation(gr, d));
    EXPECT_TRUE(isomorphic(d.end(), coproduct(d1->end(), d2->end()).apex));
}

TEST(Open, FeetAreKept) {
    // a node with a loop that is also an input: the loop can go, the node stays
    auto I = graph_interface();
    Cospan c{I, 1, 0, make_graph(2, {{0, 0}, {0, 1}}), {0}, {}};
    auto steps = one_step_open(loop_grammar(), c);
    ASSERT_EQ(steps.size(), 1u);
    EXPECT_EQ(edge_count(steps.front().after.apex), 1);
    EXPECT_EQ(steps.front().after.lleg.size(), 1u);
    // deleting the input node is refused
    auto l = make_graph(1, {});
    auto del = make_rule("del", RuleKind::fine, initial_map(l), identity(Presheaf(GRAPH())));
    Cospan lone{I, 1, 0, make_graph(1, {}), {0}, {}};
    EXPECT_TRUE(find_open_matches(del, lone, false).empty());
    EXPECT_THROW(apply_open(del, Morphism{l, lone.apex, {{}, {0}}}, lone), Error);
}
