#pragma once

#include "gen.hpp"
#include "square.hpp"

namespace opensys {

inline bool is_discrete(const InterfaceRef& I, const Presheaf& k) {
    return I->counit(k).is_iso();
}

// l <- flat(k) -> r with both legs precomposed with the counit.
inline Grammar discretize_grammar(const Grammar& gr) {
    Grammar out{gr.iface, {}, gr.monic_matches};
    for (const auto& r : gr.rules) {
        Morphism eps = gr.iface->counit(r.k());
        out.rules.push_back(make_rule(r.name, r.kind, compose(r.leg_l, eps), compose(r.leg_r, eps)));
    }
    return out;
}

inline std::string span_key(const Morphism& left, const Morphism& right) {
    return canonical_key(pack(Diagram{&span_shape(), {left.dst, left.src, right.dst}, {left, right}}));
}

inline std::string rule_key(const Rule& r) { return span_key(r.leg_l, r.leg_r); }

struct DiscreteReport {
    int hosts = 0;
    int related_pairs = 0;       // successor classes summed over hosts
    bool meets_closed = true;    // every rule middle has a meet-closed subobject lattice
    std::vector<std::string> discrepancies;

    bool ok() const { return meets_closed && discrepancies.empty(); }
};

inline std::set<std::string> successor_keys(const Grammar& gr, const Presheaf& g) {
    std::set<std::string> out;
    for (const auto& st : one_step(gr, g)) out.insert(canonical_key(st.h()));
    return out;
}

// Compares the one-step relations of gr and its discretization on every
// canonical graph host within the bounds.
inline DiscreteReport discrete_equivalence_check(const Grammar& gr, int max_nodes, int max_edges) {
    DiscreteReport rep;
    for (const auto& r : gr.rules) {
        auto subs = sub_enumerate(r.k());
        std::set<Subset> members;
        for (const auto& s : subs) members.insert(s.members);
        for (const auto& a : subs)
            for (const auto& b : subs)
                if (!members.count(sub_meet(a, b).members)) rep.meets_closed = false;
    }
    const Grammar flat = discretize_grammar(gr);
    for (const auto& g : enumerate_graphs(max_nodes, max_edges)) {
        ++rep.hosts;
        auto a = successor_keys(gr, g), b = successor_keys(flat, g);
        rep.related_pairs += static_cast<int>(a.size());
        if (a != b) rep.discrepancies.push_back(canonical_key(g));
    }
    return rep;
}

inline Cospan closed_cospan(const InterfaceRef& I, const Presheaf& x) { return Cospan{I, 0, 0, x, {}, {}}; }

// Generator square of a rule with discrete middle:
//   L0 -> l <- Lk,  L0 -> k <- Lk,  L0 -> r <- Lk.
inline Square generator_square(const InterfaceRef& I, const Rule& r) {
    if (!is_discrete(I, r.k())) throw Error("NotDiscrete", r.name + ": middle of the rule is not discrete");
    const int n = I->sort();
    auto pts = I->R(r.k());
    const int m = static_cast<int>(pts.size());
    Cospan top{I, 0, m, r.l(), {}, map_points(r.leg_l, n, pts)};
    Cospan mid{I, 0, m, r.k(), {}, pts};
    Cospan bot{I, 0, m, r.r(), {}, map_points(r.leg_r, n, pts)};
    return checked(Square{checked(top), checked(mid), checked(bot), {}, {}, iota_vec(m), iota_vec(m), r.leg_l, r.leg_r},
                   r.kind == RuleKind::fine ? SquareMode::fine : SquareMode::bold);
}

inline std::vector<Square> lift_grammar(const Grammar& gr) {
    const Grammar flat = discretize_grammar(gr);
    std::vector<Square> out;
    for (const auto& r : flat.rules) out.push_back(generator_square(gr.iface, r));
    return out;
}

// The square of one step: the rule's generator beside the identity on the
// context Lk -> d <- L0, with rows rebased onto g and h themselves. Steps of
// rules with a non-discrete middle are redone with the discretized rule at
// the same match.
inline Square step_square(const Grammar& gr, const Step& given) {
    const InterfaceRef& I = gr.iface;
    const Rule& orig = gr.rule(given.rule);
    Step st = given;
    Rule r = orig;
    if (!is_discrete(I, orig.k())) {
        Morphism eps = I->counit(orig.k());
        r = make_rule(orig.name, orig.kind, compose(orig.leg_l, eps), compose(orig.leg_r, eps));
        auto cs = complements_for(r, given.match);
        if (cs.empty()) throw Error("GluingViolation", orig.name + ": discretized rule does not apply at this match");
        st = apply_with_complement(r, given.match, cs.front());
    }
    Square gen = generator_square(I, r);
    auto pts = I->R(r.k());
    Cospan ctx = checked(Cospan{I, static_cast<int>(pts.size()), 0, st.d(), map_points(st.k_to_d, I->sort(), pts), {}});
    Square s = h_compose(gen, identity_square(ctx));
    return rebase_bottom(rebase_top(s, closed_cospan(I, given.g())), closed_cospan(I, given.h()));
}

inline Square derivation_to_square(const Grammar& gr, const Derivation& d) {
    Square out = identity_square(closed_cospan(gr.iface, d.start));
    for (const auto& st : d.steps) out = v_compose(out, step_square(gr, st));
    return out;
}

inline std::optional<Square> square_search(const Grammar& gr, const Presheaf& g, const Presheaf& h,
                                           SearchLimits lim = {}) {
    auto d = derivation_search(gr, g, h, lim);
    if (!d) return std::nullopt;
    return rebase_bottom(derivation_to_square(gr, *d), closed_cospan(gr.iface, h));
}

// Adds every derived rule g <- d -> h of gr on canonical hosts within the
// bounds, one per isomorphism class of span.
inline Grammar derived_closure_step(const Grammar& gr, int max_nodes, int max_edges) {
    Grammar out = gr;
    std::set<std::string> seen;
    for (const auto& r : gr.rules) seen.insert(rule_key(r));
    for (const auto& g : enumerate_graphs(max_nodes, max_edges))
        for (const auto& rule : gr.rules)
            for (const auto& m : hom_enumerate(rule.l(), g, gr.monic_matches))
                for (const auto& c : complements_for(rule, m)) {
                    Step st = apply_with_complement(rule, m, c);
                    auto key = span_key(st.d_to_g, st.d_to_h);
                    if (!seen.insert(key).second) continue;
                    out.rules.push_back(
                        make_rule("derived:" + short_hash(key), rule.kind, st.d_to_g, st.d_to_h));
                }
    return out;
}

// ---- decomposing closed systems ----

// Interface-sort elements shared by both halves, and a side (0 left, 1
// right) for every other element; elements generated by cut points may
// carry any side and belong to both.
struct Cut {
    std::vector<int> points;
    std::vector<std::vector<int>> side;
};

inline std::pair<Cospan, Cospan> decompose_closed(const Cospan& c, const Cut& cut) {
    if (!c.closed()) throw Error("NotClosed", "decompose_closed needs empty feet");
    const Interface& I = *c.iface;
    const Presheaf& x = c.apex;
    const int ns = x.schema().sort_count();
    if (static_cast<int>(cut.side.size()) != ns) throw Error("BadCut", "one side vector per sort");
    for (int s = 0; s < ns; ++s)
        if (static_cast<int>(cut.side[s].size()) != x.size(s)) throw Error("BadCut", "side vector has the wrong size");
    Subset shared = image(I.point_map(cut.points, x));
    Subset left = shared, right = shared;
    for (int s = 0; s < ns; ++s)
        for (int e = 0; e < x.size(s); ++e) {
            if (shared[s][e]) continue;
            if (cut.side[s][e] == 0)
                left[s][e] = 1;
            else if (cut.side[s][e] == 1)
                right[s][e] = 1;
            else
                throw Error("BadCut", "element without a side outside the cut");
        }
    for (int a = 0; a < x.schema().arrow_count(); ++a) {
        const int s = x.schema().arrows[a].src;
        for (int e = 0; e < x.size(s); ++e) {
            const int t = x.schema().arrows[a].dst, v = x.apply(a, e);
            if ((left[s][e] && !left[t][v]) || (right[s][e] && !right[t][v]))
                throw Error("SeparationViolation", x.schema().arrows[a].name + " of element " + std::to_string(e) +
                                                       " crosses the cut");
        }
    }
    Morphism li = subpresheaf(x, left), ri = subpresheaf(x, right);
    auto back = [&](const Morphism& incl) {
        std::vector<int> b(x.size(I.sort()), -1), out;
        for (int e = 0; e < incl.src.size(I.sort()); ++e) b[incl.comp[I.sort()][e]] = e;
        for (int p : cut.points) out.push_back(b[p]);
        return out;
    };
    const int k = static_cast<int>(cut.points.size());
    return {checked(Cospan{c.iface, 0, k, li.src, {}, back(li)}), checked(Cospan{c.iface, k, 0, ri.src, back(ri), {}})};
}

// ---- grammars with non-discrete middles ----

// l = k = path a -> b -> c, r adds c -> a.
inline Rule triangle_rule() {
    auto path = make_graph(3, {{0, 1}, {1, 2}});
    auto tri = make_graph(3, {{0, 1}, {1, 2}, {2, 0}});
    return make_rule("triangle", RuleKind::fine, identity(path), Morphism{path, tri, {{0, 1}, {0, 1, 2}}});
}

// l = edge a -> b with a loop on b, k = r = the edge.
inline Rule contextual_loop_rule() {
    auto l = make_graph(2, {{0, 1}, {1, 1}});
    auto k = make_graph(2, {{0, 1}});
    return make_rule("contextual-loop", RuleKind::fine, Morphism{k, l, {{0}, {0, 1}}}, identity(k));
}

inline Grammar context_grammar() { return {graph_interface(), {triangle_rule(), contextual_loop_rule()}, true}; }

} // namespace opensys
