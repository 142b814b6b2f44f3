#include <gtest/gtest.h>

#include <opensys/elements.hpp>

#include <opensys/laws/oracles.hpp>

using namespace opensys;

namespace {

Presheaf path2() { return make_graph(3, {{0, 1}, {1, 2}}); }
Presheaf edge() { return make_graph(2, {{0, 1}}); }

} // namespace

TEST(Schema, BuiltinsValidate) {
    EXPECT_TRUE(validate_schema(*SET()).empty());
    EXPECT_TRUE(validate_schema(*GRAPH()).empty());
    EXPECT_TRUE(validate_schema(*RGRAPH()).empty());
}

TEST(Schema, MissingCompositeRejected) {
    EXPECT_THROW(make_schema("bad", {"e", "n"}, {{"s", "e", "n"}, {"i", "n", "e"}}, {{"i", "s", "id"}}), Error);
}

TEST(Schema, ProductOfGraphWithCospanShapeValidates) {
    const auto& p = product_schema(GRAPH(), cospan_shape());
    EXPECT_TRUE(validate_schema(*p.schema).empty());
    EXPECT_EQ(p.schema->sort_count(), 6);
    const auto& q = product_schema(RGRAPH(), square_shape());
    EXPECT_TRUE(validate_schema(*q.schema).empty());
}

TEST(Presheaf, WellFormedGraph) {
    EXPECT_TRUE(validate_presheaf(edge()).empty());
}

TEST(Presheaf, OutOfRangeTarget) {
    Presheaf p(GRAPH(), {1, 2}, {{0}, {5}});
    auto v = validate_presheaf(p);
    ASSERT_FALSE(v.empty());
    EXPECT_EQ(v.front().code, "OutOfRangeAction");
}

TEST(Presheaf, ReflexiveFunctorialityViolation) {
    // one node, one loop used as i(n0), but s of that loop points elsewhere
    const Schema& c = *RGRAPH();
    std::vector<std::vector<int>> act(c.arrow_count());
    act[c.arrow_index("s")] = {1, 0};
    act[c.arrow_index("t")] = {0, 0};
    act[c.arrow_index("i")] = {0, 1};
    act[c.arrow_index("is")] = {1, 0};
    act[c.arrow_index("it")] = {0, 0};
    Presheaf p(RGRAPH(), {2, 2}, act);
    auto v = validate_presheaf(p);
    ASSERT_FALSE(v.empty());
    EXPECT_EQ(v.front().code, "FunctorialityViolation");
    // independent check: evaluate s(i(n)) directly
    bool broken = false;
    for (int n = 0; n < 2; ++n) broken |= p.act(c.arrow_index("s"), p.act(c.arrow_index("i"), n)) != n;
    EXPECT_TRUE(broken);
}

TEST(Hom, EdgeIntoPath) {
    auto homs = hom_enumerate(edge(), path2());
    EXPECT_EQ(homs.size(), oracle::brute_homs(edge(), path2()).size());
    ASSERT_EQ(homs.size(), 2u);
    for (const auto& h : homs) EXPECT_TRUE(h.is_mono());
}

TEST(Hom, EmptySourceHasOneMap) {
    EXPECT_EQ(hom_enumerate(Presheaf(GRAPH()), path2()).size(), 1u);
}

TEST(Hom, NodeIntoPath) {
    EXPECT_EQ(hom_enumerate(make_graph(1, {}), path2()).size(), 3u);
}

TEST(Hom, SchemaMismatch) {
    EXPECT_THROW(hom_enumerate(edge(), Presheaf(SET(), {1}, {})), Error);
}

TEST(Hom, AgreesWithBruteForceOnRandomInstances) {
    std::mt19937 rng(7);
    for (auto schema : {SET(), GRAPH(), RGRAPH()})
        for (int i = 0; i < 60; ++i) {
            auto x = oracle::random_presheaf(rng, schema, 3);
            auto y = oracle::random_presheaf(rng, schema, 3);
            for (bool monic : {false, true}) {
                auto fast = hom_enumerate(x, y, monic);
                auto slow = oracle::brute_homs(x, y, monic);
                ASSERT_EQ(fast.size(), slow.size());
                for (std::size_t k = 0; k < fast.size(); ++k) EXPECT_EQ(fast[k].comp, slow[k].comp);
            }
            auto all = hom_enumerate(x, y, false);
            for (const auto& m : hom_enumerate(x, y, true))
                EXPECT_NE(std::find(all.begin(), all.end(), m), all.end());
        }
}

TEST(Hom, FixedAssignmentsRespected) {
    HomOptions opt;
    opt.fixed = {{}, {1}};
    int count = 0;
    for_each_hom(make_graph(1, {}), path2(), opt, [&](const Morphism& m) {
        EXPECT_EQ(m.comp[1][0], 1);
        ++count;
        return true;
    });
    EXPECT_EQ(count, 1);
}

TEST(Iso, IdenticalGivesIdentity) {
    auto iso = iso_search(path2(), path2());
    ASSERT_TRUE(iso);
    EXPECT_TRUE(iso->is_iso());
    EXPECT_TRUE(is_natural(*iso));
}

TEST(Iso, TriangleRelabeling) {
    auto a = make_graph(3, {{0, 1}, {1, 2}, {2, 0}});
    auto b = make_graph(3, {{2, 0}, {1, 2}, {0, 1}});
    auto iso = iso_search(a, b);
    ASSERT_TRUE(iso);
    EXPECT_TRUE(is_natural(*iso));
    int isos = 0;
    for (const auto& m : oracle::brute_homs(a, b))
        if (m.is_iso()) ++isos;
    EXPECT_EQ(isos, 3);
}

TEST(Iso, DifferentSizes) {
    EXPECT_FALSE(iso_search(make_graph(2, {}), make_graph(3, {})));
}

TEST(Iso, LabelsMatter) {
    auto a = make_graph(2, {{0, 1}}, {"x", "y"});
    auto b = make_graph(2, {{0, 1}}, {"y", "x"});
    EXPECT_FALSE(iso_search(a, b));
    auto c = make_graph(2, {{1, 0}}, {"y", "x"});
    EXPECT_TRUE(iso_search(a, c));
}

TEST(Canonical, KeysAgreeWithBruteForceIsomorphism) {
    std::mt19937 rng(11);
    for (int i = 0; i < 300; ++i) {
        auto x = oracle::random_graph(rng, 4, 4);
        auto y = oracle::random_graph(rng, 4, 4);
        bool brute = false;
        if (x.sizes() == y.sizes())
            for (const auto& m : oracle::brute_homs(x, y, true))
                if (m.is_iso()) {
                    brute = true;
                    break;
                }
        EXPECT_EQ(canonical_key(x) == canonical_key(y), brute);
        auto iso = iso_search(x, y);
        EXPECT_EQ(iso.has_value(), brute);
        if (iso) {
            EXPECT_TRUE(is_natural(*iso) && iso->is_iso());
        }
    }
}

TEST(Canonical, InvariantUnderRandomPermutation) {
    std::mt19937 rng(5);
    for (int i = 0; i < 200; ++i) {
        auto x = oracle::random_graph(rng, 6, 8);
        std::vector<int> pn(node_count(x)), pe(edge_count(x));
        std::iota(pn.begin(), pn.end(), 0);
        std::iota(pe.begin(), pe.end(), 0);
        std::shuffle(pn.begin(), pn.end(), rng);
        std::shuffle(pe.begin(), pe.end(), rng);
        GraphView v(x.schema());
        std::vector<std::pair<int, int>> edges(edge_count(x));
        for (int e = 0; e < edge_count(x); ++e) edges[pe[e]] = {pn[x.act(v.s, e)], pn[x.act(v.t, e)]};
        auto y = make_graph(node_count(x), edges);
        EXPECT_EQ(canonical_key(x), canonical_key(y));
    }
}

TEST(Canonical, SymmetricDiscreteSetsAreFast) {
    auto x = make_graph(12, {});
    auto y = make_graph(12, {{0, 1}, {1, 0}, {2, 3}, {3, 2}, {4, 5}, {5, 4}, {6, 7}, {7, 6}});
    EXPECT_EQ(canonical_key(x), canonical_key(make_graph(12, {})));
    EXPECT_TRUE(iso_search(y, y));
}

namespace {

// The graph F of the graph-over-graph example: nodes b, b'; edges
// beta: b -> b', beta': b -> b', beta'': b' -> b'.
Presheaf graph_F() { return make_graph(2, {{0, 1}, {0, 1}, {1, 1}}); }

// theta: G -> F with G nodes a, a', a'' and edges alpha: a -> a'',
// alpha': a -> a', alpha'': a' -> a''.
Morphism theta() {
    auto G = make_graph(3, {{0, 2}, {0, 1}, {1, 2}});
    return checked(Morphism{G, graph_F(), {{0, 1, 2}, {0, 1, 1}}});
}

} // namespace

TEST(Elements, GraphOverGraphSchema) {
    auto el = category_of_elements(graph_F());
    EXPECT_EQ(el.schema->sort_count(), 5);
    EXPECT_EQ(el.schema->arrow_count(), 6);
}

TEST(Elements, GraphOverGraphFibers) {
    auto el = category_of_elements(graph_F());
    auto p = to_elements(el, theta());
    // sorts: e:0 (beta), e:1 (beta'), e:2 (beta''), n:0 (b), n:1 (b')
    std::vector<int> expected{1, 1, 1, 1, 2};
    EXPECT_EQ(p.sizes(), expected);
    const auto& c = *el.schema;
    EXPECT_EQ(c.sorts[el.sort_of[1][1]], "n:1");
}

TEST(Elements, SingleNode) {
    auto el = category_of_elements(make_graph(1, {}));
    EXPECT_EQ(el.schema->sort_count(), 1);
    EXPECT_EQ(el.schema->arrow_count(), 0);
}

TEST(Elements, RoundTripAllTypedGraphsUpToThreeNodes) {
    std::mt19937 rng(3);
    auto base = graph_F();
    auto el = category_of_elements(base);
    int checked_count = 0;
    for (int i = 0; i < 150; ++i) {
        auto g = oracle::random_graph(rng, 3, 3);
        for (const auto& t : hom_enumerate(g, base)) {
            auto back = from_elements(el, to_elements(el, t));
            EXPECT_TRUE(typed_iso_search(t, back).has_value());
            ++checked_count;
        }
    }
    EXPECT_GT(checked_count, 0);
}
