#include <gtest/gtest.h>

#include <opensys/gen.hpp>

#include <opensys/laws/oracles.hpp>

using namespace opensys;

namespace {

std::vector<int> random_function(std::mt19937& rng, int n, int m) {
    std::vector<int> f(n);
    for (auto& v : f) v = std::uniform_int_distribution<int>(0, m - 1)(rng);
    return f;
}

// graph1 nodes a..e, graph2 nodes d, e, f
Cospan connecting_left() {
    return checked(Cospan{graph_interface(), 3, 2,
                          make_graph(5, {{0, 1}, {1, 3}, {3, 0}, {4, 3}, {3, 2}, {2, 1}}), {0, 2, 3}, {3, 4}});
}
Cospan connecting_right() {
    return checked(Cospan{graph_interface(), 2, 2, make_graph(3, {{0, 1}, {1, 2}, {2, 0}}), {0, 1}, {1, 2}});
}

} // namespace

TEST(Interface, LIsDiscrete) {
    auto g = graph_interface()->L(3);
    EXPECT_EQ(node_count(g), 3);
    EXPECT_EQ(edge_count(g), 0);
    EXPECT_EQ(graph_interface()->L(0), Presheaf(GRAPH()));
    // reflexive graphs: each point carries its identity loop
    auto r = rgraph_interface()->L(2);
    EXPECT_EQ(node_count(r), 2);
    EXPECT_EQ(edge_count(r), 2);
    EXPECT_TRUE(validate_presheaf(r).empty());
}

TEST(Interface, LMapReinterpretsFunctions) {
    auto m = graph_interface()->L_map({1, 1, 0}, 2);
    EXPECT_TRUE(is_natural(m));
    EXPECT_EQ(m.comp[1], (std::vector<int>{1, 1, 0}));
    auto r = rgraph_interface()->L_map({0, 0}, 1);
    EXPECT_TRUE(is_natural(r));
}

TEST(Interface, RCounitFlat) {
    auto c = compose(checked(Cospan{graph_interface(), 2, 1, make_graph(4, {{0, 2}, {1, 2}, {2, 3}}), {0, 1}, {3}}),
                     checked(Cospan{graph_interface(), 1, 3, make_graph(4, {{0, 1}, {0, 2}, {0, 3}}), {0}, {1, 2, 3}}));
    EXPECT_EQ(graph_interface()->R_size(c.apex), 7);
    auto tri = make_graph(3, {{0, 1}, {1, 2}, {2, 0}});
    auto fl = graph_interface()->flat(tri);
    EXPECT_EQ(node_count(fl), 3);
    EXPECT_EQ(edge_count(fl), 0);
    EXPECT_TRUE(graph_interface()->counit(tri).is_mono());
    EXPECT_EQ(graph_interface()->flat(fl), fl);
    EXPECT_THROW(graph_interface()->R(Presheaf(SET())), Error);
}

TEST(Interface, LabelledInterfaceFiltersR) {
    auto I = std::make_shared<Interface>(GRAPH(), "n", "white");
    auto x = make_graph(3, {{0, 1}}, {"white", "grey", "white"});
    EXPECT_EQ(I->R(x), (std::vector<int>{0, 2}));
    EXPECT_EQ(I->L(2).label(1, 0), "white");
    EXPECT_TRUE(I->counit(x).is_mono());
}

TEST(Interface, CounitMonicOnRandomPresheaves) {
    std::mt19937 rng(5);
    for (int i = 0; i < 100; ++i) {
        auto x = oracle::random_presheaf(rng, RGRAPH(), 3);
        EXPECT_TRUE(rgraph_interface()->counit(x).is_mono());
        auto g = oracle::random_graph(rng, 4, 4);
        EXPECT_TRUE(graph_interface()->counit(g).is_mono());
    }
}

TEST(Interface, TriangleIdentities) {
    std::mt19937 rng(6);
    for (const auto& I : {graph_interface(), rgraph_interface()}) {
        // eps_La . L(eta_a) = id for |a| <= 3
        for (int a = 0; a <= 3; ++a) {
            Presheaf La = I->L(a);
            auto RLa = I->R(La);
            std::vector<int> eta;
            for (int i = 0; i < a; ++i)
                eta.push_back(static_cast<int>(std::find(RLa.begin(), RLa.end(), i) - RLa.begin()));
            auto lhs = compose(I->counit(La), I->L_map(eta, static_cast<int>(RLa.size())));
            EXPECT_EQ(lhs.comp, identity(La).comp);
        }
        // R(eps_x) . eta_Rx = id for carriers <= 3
        for (int k = 0; k < 40; ++k) {
            auto x = oracle::random_presheaf(rng, I->schema(), 3);
            const auto rx = I->R(x);
            const auto eps = I->counit(x);
            const auto rlrx = I->R(eps.src);
            for (int i = 0; i < static_cast<int>(rx.size()); ++i) {
                const int j = static_cast<int>(std::find(rlrx.begin(), rlrx.end(), i) - rlrx.begin());
                EXPECT_EQ(eps.comp[I->sort()][rlrx[j]], rx[i]);
            }
        }
    }
}

TEST(Interface, LPreservesPullbacksAndCoproducts) {
    std::mt19937 rng(7);
    for (const auto& I : {graph_interface(), rgraph_interface()}) {
        for (int k = 0; k < 60; ++k) {
            const int a = std::uniform_int_distribution<int>(0, 3)(rng);
            const int c = std::uniform_int_distribution<int>(0, 3)(rng);
            const int b = std::uniform_int_distribution<int>(1, 3)(rng);
            auto f = random_function(rng, a, b), g = random_function(rng, c, b);
            int pairs = 0;
            for (int i = 0; i < a; ++i)
                for (int j = 0; j < c; ++j) pairs += f[i] == g[j];
            auto pb = pullback(I->L_map(f, b), I->L_map(g, b));
            EXPECT_TRUE(isomorphic(pb.apex, I->L(pairs)));
            EXPECT_TRUE(isomorphic(coproduct(I->L(a), I->L(c)).apex, I->L(a + c)));
            EXPECT_TRUE(I->sum_iso(a, c).is_iso());
        }
    }
}

TEST(Cospan, OpenGraphAsArrow) {
    auto I = graph_interface();
    Cospan x = checked(Cospan{I, 2, 1, make_graph(4, {{0, 2}, {1, 2}, {2, 3}}), {0, 1}, {3}});
    Cospan y = checked(Cospan{I, 1, 3, make_graph(4, {{0, 1}, {0, 2}, {0, 3}}), {0}, {1, 2, 3}});
    auto c = compose(x, y);
    EXPECT_EQ(node_count(c.apex), 7);
    EXPECT_EQ(edge_count(c.apex), 6);
    EXPECT_EQ(c.left, 2);
    EXPECT_EQ(c.right, 3);
    EXPECT_TRUE(validate_cospan(c).empty());
    EXPECT_THROW(compose(y, y), Error);
}

TEST(Cospan, ConnectingOpenGraphs) {
    auto c = compose(connecting_left(), connecting_right());
    EXPECT_EQ(node_count(c.apex), 6);
    EXPECT_EQ(edge_count(c.apex), 9);
    EXPECT_EQ(c.left, 3);
    EXPECT_EQ(c.right, 2);
}

TEST(Cospan, TensorExample) {
    auto I = graph_interface();
    Cospan a = checked(Cospan{I, 2, 0, make_graph(3, {{0, 1}, {0, 2}, {1, 2}}), {0, 1}, {}});
    Cospan b = checked(Cospan{I, 1, 1, make_graph(2, {{0, 1}}), {0}, {1}});
    auto t = tensor(a, b);
    EXPECT_EQ(t.left, 3);
    EXPECT_EQ(t.right, 1);
    EXPECT_EQ(node_count(t.apex), 5);
    EXPECT_EQ(edge_count(t.apex), 4);
    EXPECT_EQ(t.lleg, (std::vector<int>{0, 1, 3}));
    EXPECT_TRUE(cospan_isomorphic(tensor(a, empty_cospan(I)), a));
    EXPECT_TRUE(cospan_isomorphic(tensor(empty_cospan(I), a), a));
}

TEST(Cospan, UnitLawsAndAssociativity) {
    std::mt19937 rng(8);
    auto I = graph_interface();
    for (int k = 0; k < 60; ++k) {
        const int a = std::uniform_int_distribution<int>(0, 2)(rng), b = std::uniform_int_distribution<int>(0, 2)(rng);
        const int c = std::uniform_int_distribution<int>(0, 2)(rng), d = std::uniform_int_distribution<int>(0, 2)(rng);
        auto x = random_open_graph(rng, I, a, b, 4, 4);
        auto y = random_open_graph(rng, I, b, c, 4, 4);
        auto z = random_open_graph(rng, I, c, d, 4, 4);
        EXPECT_TRUE(cospan_isomorphic(compose(identity_cospan(I, a), x), x));
        EXPECT_TRUE(cospan_isomorphic(compose(x, identity_cospan(I, b)), x));
        auto l = compose(compose(x, y), z), r = compose(x, compose(y, z));
        auto iso = cospan_iso_search(l, r);
        ASSERT_TRUE(iso);
        EXPECT_TRUE(cospan_morphism_check(l, r, *iso));
        EXPECT_TRUE(iso->g.is_iso());
    }
}

TEST(Cospan, TensorSymmetryViaBraiding) {
    std::mt19937 rng(9);
    auto I = graph_interface();
    for (int k = 0; k < 40; ++k) {
        const int a = std::uniform_int_distribution<int>(0, 2)(rng), b = std::uniform_int_distribution<int>(0, 2)(rng);
        const int c = std::uniform_int_distribution<int>(0, 2)(rng), d = std::uniform_int_distribution<int>(0, 2)(rng);
        auto x = random_open_graph(rng, I, a, b, 3, 3);
        auto y = random_open_graph(rng, I, c, d, 3, 3);
        // braid . (x (x) y) ~ (y (x) x) . braid
        auto l = compose(braiding(I, c, a), tensor(x, y));
        auto r = compose(tensor(y, x), braiding(I, d, b));
        EXPECT_TRUE(cospan_isomorphic(l, r));
        // braiding is self-inverse
        EXPECT_TRUE(cospan_isomorphic(compose(braiding(I, a, b), braiding(I, b, a)), identity_cospan(I, a + b)));
    }
}

TEST(Cospan, EvaluationShapes) {
    auto I = graph_interface();
    EXPECT_EQ(evaluation(I, 0), empty_cospan(I));
    EXPECT_EQ(coevaluation(I, 0), empty_cospan(I));
    auto e = evaluation(I, 1);
    EXPECT_EQ(e.left, 2);
    EXPECT_EQ(e.right, 0);
    EXPECT_EQ(node_count(e.apex), 1);
    EXPECT_EQ(e.lleg, (std::vector<int>{0, 0}));
}

TEST(Cospan, SnakeIdentities) {
    for (const auto& I : {graph_interface(), rgraph_interface()})
        for (int a = 0; a <= 3; ++a) {
            auto id = identity_cospan(I, a);
            auto s1 = compose(tensor(id, coevaluation(I, a)), tensor(evaluation(I, a), id));
            auto s2 = compose(tensor(coevaluation(I, a), id), tensor(id, evaluation(I, a)));
            EXPECT_TRUE(cospan_isomorphic(s1, id)) << a;
            EXPECT_TRUE(cospan_isomorphic(s2, id)) << a;
        }
}

TEST(CospanMorphism, Checks) {
    auto c = connecting_left();
    CospanMorphism id{iota_vec(3), identity(c.apex), iota_vec(2)};
    EXPECT_TRUE(cospan_morphism_check(c, c, id));
    // swap the first two inputs without moving the apex: left square fails
    CospanMorphism bad{{1, 0, 2}, identity(c.apex), iota_vec(2)};
    EXPECT_FALSE(cospan_morphism_check(c, c, bad));
}

TEST(CospanMorphism, RelabelledApexIsIsomorphic) {
    std::mt19937 rng(10);
    auto I = graph_interface();
    for (int k = 0; k < 40; ++k) {
        auto c = random_open_graph(rng, I, 2, 1, 4, 4);
        // permute nodes
        std::vector<int> perm = iota_vec(node_count(c.apex));
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<std::pair<int, int>> edges;
        const auto& g = c.apex;
        for (int e = 0; e < edge_count(g); ++e)
            edges.emplace_back(perm[g.apply(g.schema().arrow_index("s"), e)],
                               perm[g.apply(g.schema().arrow_index("t"), e)]);
        Cospan d{I, c.left, c.right, make_graph(node_count(g), edges), map_points(Morphism{g, g, {{}, perm}}, 1, c.lleg),
                 map_points(Morphism{g, g, {{}, perm}}, 1, c.rleg)};
        auto iso = cospan_iso_search(c, d);
        ASSERT_TRUE(iso);
        EXPECT_TRUE(cospan_morphism_check(c, d, *iso));
        EXPECT_EQ(cospan_key(c), cospan_key(d));
    }
    // pinned feet: swapping the legs is a different cospan unless the apex allows it
    auto e = checked(Cospan{I, 2, 0, make_graph(2, {{0, 1}}), {0, 1}, {}});
    auto f = checked(Cospan{I, 2, 0, make_graph(2, {{0, 1}}), {1, 0}, {}});
    EXPECT_FALSE(cospan_isomorphic(e, f));
}
