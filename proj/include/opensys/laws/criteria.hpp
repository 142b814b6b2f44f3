#pragma once

// Acceptance checks with their instance counts pinned. Used by the
// acceptance binary and by `opensys check`.

#include "../elements.hpp"
#include "../language.hpp"
#include "../zx.hpp"

#include "square_gen.hpp"

#include <functional>

namespace suite {

struct Verdict {
    bool ok = true;
    std::string detail;
    double seconds = 0;
};

// Sizes and seeds of every check.
namespace pinned {
inline constexpr int oracle_instances = 200;
inline constexpr int complement_max_nodes = 4;
inline constexpr int complement_max_edges = 4;
inline constexpr int adhesive_instances = 100;
inline constexpr int vk_instances = 100;
inline constexpr int interchange_fine = 100;
inline constexpr int interchange_bold = 50;
inline constexpr double interchange_seconds = 60.0;
inline constexpr int relation_max_feet = 3;
inline constexpr int discrete_max_nodes = 3;
inline constexpr int discrete_max_edges = 3;
inline constexpr int inductive_max_nodes = 4;
inline constexpr int inductive_max_edges = 4;
inline constexpr int inductive_depth = 3;
inline constexpr int snake_depth = 6;
inline constexpr int elements_max_nodes = 3;
inline constexpr int elements_max_edges = 3;
inline constexpr double example_seconds = 1.0;
}  // namespace pinned

inline Verdict timed(const std::function<Verdict()>& f) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
        v = f();
    } catch (const std::exception& e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    v.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return v;
}

inline void expect(Verdict& v, bool cond, const std::string& what) {
    if (!cond) {
        v.ok = false;
        v.detail += (v.detail.empty() ? "" : "; ") + what;
    }
}

inline Verdict from_tally(const Tally& t) { return {t.ok(), t.summary()}; }

inline Presheaf two_loop_host() { return make_graph(4, {{1, 1}, {2, 2}, {0, 2}, {1, 2}, {2, 3}}); }
inline Presheaf two_loop_host_loopless() { return make_graph(4, {{0, 2}, {1, 2}, {2, 3}}); }

// ---- fixed examples ----

inline Verdict example_loop_removal() {
    Verdict v;
    auto g = make_graph(3, {{0, 2}, {1, 2}, {2, 2}});
    auto ms = find_matches(loop_rule(), g, false);
    expect(v, ms.size() == 1, "loop rule should match once");
    auto st = apply_rule(loop_rule(), ms.front());
    expect(v, isomorphic(st.h(), make_graph(3, {{0, 2}, {1, 2}})), "result is not the loopless 3-node graph");
    expect(v, node_count(st.h()) == 3 && edge_count(st.h()) == 2, "result size");
    return v;
}

inline Verdict example_open_graph_composite() {
    Verdict v;
    auto I = graph_interface();
    Cospan x = checked(Cospan{I, 2, 1, make_graph(4, {{0, 2}, {1, 2}, {2, 3}}), {0, 1}, {3}});
    Cospan y = checked(Cospan{I, 1, 3, make_graph(4, {{0, 1}, {0, 2}, {0, 3}}), {0}, {1, 2, 3}});
    auto c = compose(x, y);
    expect(v, node_count(c.apex) == 7 && edge_count(c.apex) == 6, "apex is not 7 nodes / 6 edges");
    expect(v, c.left == 2 && c.right == 3, "feet are not 2 / 3");
    return v;
}

inline Verdict example_connecting_open_graphs() {
    Verdict v;
    auto I = graph_interface();
    Cospan a = checked(Cospan{I, 3, 2, make_graph(5, {{0, 1}, {1, 3}, {3, 0}, {4, 3}, {3, 2}, {2, 1}}), {0, 2, 3},
                              {3, 4}});
    Cospan b = checked(Cospan{I, 2, 2, make_graph(3, {{0, 1}, {1, 2}, {2, 0}}), {0, 1}, {1, 2}});
    auto c = compose(a, b);
    expect(v, node_count(c.apex) == 6 && edge_count(c.apex) == 9, "apex is not 6 nodes / 9 edges");
    return v;
}

inline Verdict example_tensor() {
    Verdict v;
    auto I = graph_interface();
    Cospan a = checked(Cospan{I, 2, 0, make_graph(3, {{0, 1}, {0, 2}, {1, 2}}), {0, 1}, {}});
    Cospan b = checked(Cospan{I, 1, 1, make_graph(2, {{0, 1}}), {0}, {1}});
    auto t = tensor(a, b);
    expect(v, node_count(t.apex) == 5 && edge_count(t.apex) == 4, "apex is not 5 nodes / 4 edges");
    return v;
}

inline Verdict fixed_examples() {
    Verdict v;
    const std::pair<const char*, Verdict (*)()> cases[] = {{"loop-removal", example_loop_removal},
                                                           {"open-graph", example_open_graph_composite},
                                                           {"connecting", example_connecting_open_graphs},
                                                           {"tensor", example_tensor}};
    for (const auto& [name, f] : cases) {
        auto r = timed(f);
        expect(v, r.ok, std::string(name) + ": " + r.detail);
        expect(v, r.seconds < pinned::example_seconds, std::string(name) + " took too long");
        if (r.ok) v.detail += (v.detail.empty() ? "" : ", ") + std::string(name) + " ok";
    }
    return v;
}

// ---- oracle suites ----

inline Verdict universal_property(unsigned seed = 1) {
    std::mt19937 rng(seed);
    auto po = pushout_oracle(rng, pinned::oracle_instances);
    auto pb = pullback_oracle(rng, pinned::oracle_instances);
    return {po.ok() && pb.ok(), "pushouts: " + po.summary() + " | pullbacks: " + pb.summary()};
}

inline Verdict complement_uniqueness_check() {
    auto t = complement_uniqueness({loop_rule(), edge_contraction_rule(), node_deletion_rule()},
                                   pinned::complement_max_nodes, pinned::complement_max_edges);
    Verdict v = from_tally(t.tally);
    expect(v, t.applied > 0 && t.rejected > 0, "both branches must occur");
    v.detail += ", " + std::to_string(t.applied) + " applied, " + std::to_string(t.rejected) + " rejected";
    return v;
}

inline Verdict adhesive_check(unsigned seed = 2) {
    std::mt19937 rng(seed);
    auto a = adhesive(rng, pinned::adhesive_instances);
    auto vk = vk_dual(rng, pinned::vk_instances);
    Verdict v{a.ok() && vk.tally.ok(), "adhesive: " + a.summary() + " | vk dual: " + vk.tally.summary()};
    expect(v, vk.pullback_cases > 0 && vk.non_pullback_cases > 0, "vk dual exercised one branch only");
    return v;
}

inline Verdict interchange_check_suite(unsigned seed = 3) {
    std::mt19937 rng(seed);
    auto f = interchange_suite(rng, pinned::interchange_fine, SquareMode::fine);
    auto b = interchange_suite(rng, pinned::interchange_bold, SquareMode::bold);
    Verdict v{f.tally.ok() && b.tally.ok(), "fine: " + f.tally.summary() + " | bold: " + b.tally.summary()};
    expect(v, f.seconds + b.seconds < pinned::interchange_seconds, "suite exceeded its time budget");
    return v;
}

// ---- relational structure and compact closure ----

inline Verdict relations_check() {
    Verdict v;
    auto I = graph_interface();
    int laws = 0;
    for (int a = 0; a <= pinned::relation_max_feet; ++a) {
        for (const auto& rep : {comonoid_laws(I, a), frobenius_laws(I, a), triangle_laws(delta_adjunction(I, a)),
                                triangle_laws(eps_adjunction(I, a))}) {
            laws += static_cast<int>(rep.laws.size());
            expect(v, rep.ok(), "a=" + std::to_string(a) + ": " + rep.failed());
        }
        // both Frobenius sides are L(a+a) -codiagonal-> La <-codiagonal- L(a+a)
        auto rs = relation_structure(I, a);
        const auto id = identity_cospan(I, a);
        for (const auto& side : {compose(rs.delta_star, rs.delta),
                                 compose(tensor(rs.delta, id), tensor(id, rs.delta_star)),
                                 compose(tensor(id, rs.delta), tensor(rs.delta_star, id))})
            expect(v,
                   side.left == 2 * a && side.right == 2 * a && node_count(side.apex) == a &&
                       edge_count(side.apex) == 0 && side.lleg == codiagonal(a) && side.rleg == codiagonal(a),
                   "a=" + std::to_string(a) + ": Frobenius side is not the codiagonal cospan");
    }
    if (v.ok) v.detail = std::to_string(laws) + " laws";
    return v;
}

inline Verdict compact_closure_check() {
    Verdict v;
    int n = 0;
    for (const auto& I : {graph_interface(), rgraph_interface()})
        for (int a = 0; a <= pinned::relation_max_feet; ++a) {
            auto id = identity_cospan(I, a);
            auto s1 = compose(tensor(id, coevaluation(I, a)), tensor(evaluation(I, a), id));
            auto s2 = compose(tensor(coevaluation(I, a), id), tensor(id, evaluation(I, a)));
            expect(v, cospan_isomorphic(s1, id), I->schema()->name + " a=" + std::to_string(a) + " left snake");
            expect(v, cospan_isomorphic(s2, id), I->schema()->name + " a=" + std::to_string(a) + " right snake");
            n += 2;
        }
    if (v.ok) v.detail = std::to_string(n) + " snake identities";
    return v;
}

// ---- discrete grammars and squares of derivations ----

inline Verdict discrete_grammar_check() {
    Verdict v;
    Grammar loops = loop_grammar();
    loops.monic_matches = true;
    for (const auto& [name, gr] : {std::pair{"context", context_grammar()}, std::pair{"loop", loops}}) {
        auto rep = discrete_equivalence_check(gr, pinned::discrete_max_nodes, pinned::discrete_max_edges);
        expect(v, rep.ok(), std::string(name) + ": " + std::to_string(rep.discrepancies.size()) + " hosts differ");
        expect(v, rep.related_pairs > 0, std::string(name) + ": vacuous");
        v.detail += (v.detail.empty() ? "" : ", ") + std::string(name) + " " + std::to_string(rep.hosts) + " hosts/" +
                    std::to_string(rep.related_pairs) + " pairs";
    }
    return v;
}

// Builds the square removing the given loops of g straight from generator
// squares: k loop generators beside the identity on what is left.
inline Square loop_removal_square(const Grammar& gr, const Presheaf& g, const std::vector<int>& loops) {
    const InterfaceRef& I = gr.iface;
    const Square gen = lift_grammar(gr)[0];
    Square s = identity_square(empty_cospan(I));
    for (std::size_t i = 0; i < loops.size(); ++i) s = i == 0 ? gen : tensor_square(s, gen);
    std::vector<std::pair<int, int>> rest;
    std::vector<int> pts;
    for (int e = 0; e < edge_count(g); ++e) {
        const int u = g.apply(0, e), w = g.apply(1, e);
        if (std::find(loops.begin(), loops.end(), e) != loops.end())
            pts.push_back(u);
        else
            rest.emplace_back(u, w);
    }
    Cospan ctx = checked(Cospan{I, static_cast<int>(pts.size()), 0, make_graph(node_count(g), rest), pts, {}});
    return h_compose(s, identity_square(ctx));
}

// Derivations and squares agree: every loop subset of size <= depth gives a
// generated square whose endpoints are connected by a derivation, and every
// derivation target yields a valid square and is one of those endpoints.
inline Verdict inductive_rewriting_check() {
    Verdict v;
    const Grammar gr = loop_grammar();
    int hosts = 0, squares = 0, pairs = 0;
    for (const auto& g : enumerate_graphs(pinned::inductive_max_nodes, pinned::inductive_max_edges)) {
        ++hosts;
        std::vector<int> loops;
        for (int e = 0; e < edge_count(g); ++e)
            if (g.apply(0, e) == g.apply(1, e)) loops.push_back(e);
        std::set<std::string> generated;
        const int n = static_cast<int>(loops.size());
        for (int mask = 0; mask < (1 << n); ++mask) {
            std::vector<int> chosen;
            for (int i = 0; i < n; ++i)
                if (mask >> i & 1) chosen.push_back(loops[i]);
            if (static_cast<int>(chosen.size()) > pinned::inductive_depth) continue;
            Square s = loop_removal_square(gr, g, chosen);
            ++squares;
            if (!is_square(s, SquareMode::fine) || !isomorphic(s.top.apex, g)) {
                expect(v, false, "generated square invalid on " + canonical_key(g));
                continue;
            }
            generated.insert(canonical_key(s.bot.apex));
            auto d = derivation_search(gr, g, s.bot.apex, {static_cast<int>(chosen.size()), 100000});
            expect(v, d && verify_derivation(gr, *d), "square without derivation on " + canonical_key(g));
        }
        auto reach = reachable(gr, g, pinned::inductive_depth);
        for (const auto& [key, h] : reach) {
            ++pairs;
            auto s = square_search(gr, g, h, {pinned::inductive_depth, 100000});
            expect(v, s && is_square(*s, SquareMode::fine) && isomorphic(s->top.apex, g) && isomorphic(s->bot.apex, h),
                   "derivation without valid square on " + canonical_key(g));
            expect(v, generated.count(key) > 0, "reachable host not generated on " + canonical_key(g));
        }
        expect(v, generated.size() == reach.size(), "generated and reachable sets differ on " + canonical_key(g));
        if (!v.ok) break;
    }
    v.detail = std::to_string(hosts) + " hosts, " + std::to_string(squares) + " generated squares, " +
               std::to_string(pairs) + " derivation pairs" + (v.detail.empty() ? "" : "; " + v.detail);
    return v;
}

// ---- ZX ----

inline std::vector<Phase> exhaustive_phases() {
    std::vector<Phase> out;
    for (int d : {1, 2, 3, 4, 6})
        for (int k = -2 * d; k < 2 * d; ++k) out.push_back(Phase::of(k, d));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline Cospan zx_snake() {
    auto wire = zx_generator("wire", 1, 1);
    return compose(tensor(wire, zx_generator("cap", 0, 2)), tensor(zx_generator("cup", 2, 0), wire));
}

inline Verdict zx_fusion_check() {
    Verdict v;
    const auto ps = exhaustive_phases();
    const auto pack = builtin_pack();
    int n = 0;
    for (ZXKind color : {ZXKind::green, ZXKind::red})
        for (const auto& a : ps)
            for (const auto& b : ps) {
                auto d = compose(zx_spider(ZXType{color, a}, 2, 1), zx_spider(ZXType{color, b}, 1, 1));
                auto target = zx_spider(ZXType{color, a + b}, 2, 1);
                auto fused = zx_search(pack, d, target, {1, 1000});
                ++n;
                if (!fused || fused->size() != 1 || !verify_zx_derivation(*fused)) {
                    expect(v, false, "no fusion for " + a.str() + " + " + b.str());
                    continue;
                }
                auto labels = node_labels(fused->end().apex);
                int hits = 0;
                for (const auto& l : labels) hits += l == ZXType(color, a + b).label();
                expect(v, hits == 1, "fused phase is not " + (a + b).str());
            }
    v.detail = std::to_string(n) + " fusions";
    return v;
}

inline Verdict zx_snake_check() {
    Verdict v;
    auto wire = zx_generator("wire", 1, 1);
    auto d = zx_search(builtin_pack(), zx_snake(), wire, {pinned::snake_depth, 500000});
    expect(v, d.has_value(), "no derivation within depth " + std::to_string(pinned::snake_depth));
    if (d) {
        expect(v, verify_zx_derivation(*d), "derivation does not re-verify");
        expect(v, cospan_isomorphic(d->end(), wire), "end is not the wire");
        v.detail = std::to_string(d->size()) + " steps";
    }
    return v;
}

inline Verdict zx_laws_check() {
    Verdict v;
    const auto ps = exhaustive_phases();
    expect(v, ps.size() == 16, "phase set should have 16 classes");
    long checks = 0;
    for (const auto& a : ps) {
        expect(v, a + Phase{} == a && a + -a == Phase{} && parse_phase(a.str()) == a, "unit/inverse at " + a.str());
        for (const auto& b : ps) {
            expect(v, a + b == b + a, "commutativity");
            for (const auto& c : ps) {
                expect(v, (a + b) + c == a + (b + c), "associativity");
                ++checks;
            }
        }
        for (int n = 0; n <= 2; ++n)
            for (int m = 0; m <= 2; ++m)
                for (const auto& d : {zx_spider(zx_green(a), n, m), zx_spider(zx_red(a), n, m)}) {
                    expect(v, dagger(dagger(d)) == d, "dagger involution at " + a.str());
                    ++checks;
                }
    }
    if (v.ok) v.detail = std::to_string(checks) + " checks";
    return v;
}

inline Verdict zx_check() {
    Verdict v;
    for (const auto& [name, f] : {std::pair{"fusion", zx_fusion_check}, std::pair{"snake", zx_snake_check},
                                  std::pair{"laws", zx_laws_check}}) {
        auto r = f();
        expect(v, r.ok, std::string(name) + ": " + r.detail);
        if (r.ok) v.detail += (v.detail.empty() ? "" : ", ") + std::string(name) + " " + r.detail;
    }
    return v;
}

// ---- category of elements ----

inline Verdict elements_check() {
    Verdict v;
    auto base = make_graph(2, {{0, 1}, {0, 1}, {1, 1}});
    auto el = category_of_elements(base);
    expect(v, el.schema->sort_count() == 5 && el.schema->arrow_count() == 6, "schema is not 5 sorts / 6 arrows");
    auto G = make_graph(3, {{0, 2}, {0, 1}, {1, 2}});
    auto p = to_elements(el, checked(Morphism{G, base, {{0, 1, 2}, {0, 1, 1}}}));
    expect(v, p.sizes() == std::vector<int>{1, 1, 1, 1, 2}, "fibers differ");
    int typed = 0;
    for (const auto& g : enumerate_graphs(pinned::elements_max_nodes, pinned::elements_max_edges))
        for (const auto& t : hom_enumerate(g, base)) {
            ++typed;
            expect(v, typed_iso_search(t, from_elements(el, to_elements(el, t))).has_value(),
                   "round trip fails on " + canonical_key(g));
        }
    expect(v, typed > 0, "no typed graphs");
    v.detail = std::to_string(typed) + " typed graphs" + (v.detail.empty() ? "" : "; " + v.detail);
    return v;
}

struct Criterion {
    const char* name;
    Verdict (*run)();
};

inline const std::vector<Criterion>& acceptance_criteria() {
    static const std::vector<Criterion> all{
        {"example-regressions", fixed_examples},
        {"universal-property-oracle", [] { return universal_property(); }},
        {"complement-uniqueness", complement_uniqueness_check},
        {"adhesivity", [] { return adhesive_check(); }},
        {"interchange", [] { return interchange_check_suite(); }},
        {"relational-structure", relations_check},
        {"compact-closure", compact_closure_check},
        {"discrete-grammar", discrete_grammar_check},
        {"inductive-rewriting", inductive_rewriting_check},
        {"zx", zx_check},
        {"category-of-elements", elements_check},
    };
    return all;
}

}  // namespace suite
