#pragma once

#include "cospan.hpp"

#include <deque>
#include <unordered_map>

namespace opensys {

enum class RuleKind { fine, bold };

inline const char* to_string(RuleKind k) { return k == RuleKind::fine ? "fine" : "bold"; }

// A rule l <- k -> r.
struct Rule {
    std::string name;
    RuleKind kind = RuleKind::fine;
    Morphism leg_l;  // k -> l
    Morphism leg_r;  // k -> r

    const Presheaf& l() const { return leg_l.dst; }
    const Presheaf& k() const { return leg_l.src; }
    const Presheaf& r() const { return leg_r.dst; }
};

inline std::vector<Violation> validate_rule(const Rule& r) {
    std::vector<Violation> out;
    if (!(r.leg_l.src == r.leg_r.src)) out.push_back({"SpanMismatch", r.name + ": legs have different sources"});
    for (const auto* m : {&r.leg_l, &r.leg_r})
        for (auto& v : validate_morphism(*m)) out.push_back({v.code, r.name + ": " + v.detail});
    if (!out.empty()) return out;
    if (r.kind == RuleKind::fine && (!r.leg_l.is_mono() || !r.leg_r.is_mono()))
        out.push_back({"NotMonic", r.name + ": fine rules need monic legs"});
    return out;
}

inline Rule make_rule(std::string name, RuleKind kind, Morphism leg_l, Morphism leg_r) {
    Rule r{std::move(name), kind, std::move(leg_l), std::move(leg_r)};
    auto v = validate_rule(r);
    if (!v.empty()) throw Error(v.front().code, v.front().detail);
    return r;
}

struct Grammar {
    InterfaceRef iface;
    std::vector<Rule> rules;
    bool monic_matches = false;

    const Rule& rule(const std::string& name) const {
        for (const auto& r : rules)
            if (r.name == name) return r;
        throw Error("UnknownRule", name);
    }
};

// One double-pushout diagram: l <- k -> r over g <- d -> h.
struct Step {
    std::string rule;
    Morphism match;   // l -> g
    Morphism k_to_d;
    Morphism d_to_g;
    Morphism d_to_h;
    Morphism r_to_h;

    const Presheaf& g() const { return match.dst; }
    const Presheaf& d() const { return d_to_g.src; }
    const Presheaf& h() const { return d_to_h.dst; }
};

inline std::vector<Complement> complements_for(const Rule& rule, const Morphism& match) {
    if (rule.leg_l.is_mono()) {
        auto c = pushout_complement(rule.leg_l, match);
        if (!c) return {};
        return {*c};
    }
    return all_pushout_complements(rule.leg_l, match);
}

// Both squares of the diagram are pushouts and the whole thing commutes.
inline bool verify_step(const Rule& rule, const Step& st) {
    if (!(st.match.src == rule.l()) || !(st.k_to_d.src == rule.k()) || !(st.r_to_h.src == rule.r())) return false;
    for (const auto* m : {&st.match, &st.k_to_d, &st.d_to_g, &st.d_to_h, &st.r_to_h})
        if (!is_natural(*m)) return false;
    if (!st.d_to_g.is_mono() && rule.leg_l.is_mono()) return false;
    auto left = pushout(rule.leg_l, st.k_to_d);
    auto right = pushout(rule.leg_r, st.k_to_d);
    try {
        if (!left.factorize(st.match, st.d_to_g).is_iso()) return false;
        if (!right.factorize(st.r_to_h, st.d_to_h).is_iso()) return false;
    } catch (const Error&) {
        return false;
    }
    if (rule.kind == RuleKind::fine && (!st.d_to_g.is_mono() || !st.d_to_h.is_mono())) return false;
    return true;
}

inline Step apply_with_complement(const Rule& rule, const Morphism& match, const Complement& c) {
    auto po = pushout(rule.leg_r, c.k_to_d);
    Step st{rule.name, match, c.k_to_d, c.d_to_g, po.leg_right, po.leg_left};
    if (!verify_step(rule, st)) throw Error("VerificationFailed", rule.name + ": step does not re-verify");
    return st;
}

inline Step apply_rule(const Rule& rule, const Morphism& match) {
    if (!(match.src == rule.l())) throw Error("NotComposable", "match does not start at the left side of " + rule.name);
    auto cs = complements_for(rule, match);
    if (cs.empty()) throw Error("GluingViolation", rule.name + ": " + gluing_problem(rule.leg_l, match));
    if (cs.size() > 1)
        throw Error("AmbiguousComplement",
                    rule.name + ": " + std::to_string(cs.size()) + " complements; choose one explicitly");
    return apply_with_complement(rule, match, cs.front());
}

inline std::vector<Morphism> find_matches(const Rule& rule, const Presheaf& g, bool monic) {
    require_same_schema(rule.l(), g, "find_matches");
    std::vector<Morphism> out;
    for (auto& m : hom_enumerate(rule.l(), g, monic))
        if (!complements_for(rule, m).empty()) out.push_back(std::move(m));
    return out;
}

// Successors of g under every rule and match, one per isomorphism class of
// result, sorted by canonical key.
inline std::vector<Step> one_step(const Grammar& gr, const Presheaf& g) {
    std::map<std::string, Step> by_key;
    for (const auto& rule : gr.rules)
        for (const auto& m : hom_enumerate(rule.l(), g, gr.monic_matches))
            // several complements only arise for non-monic left legs; each is a successor
            for (const auto& c : complements_for(rule, m)) {
                Step st = apply_with_complement(rule, m, c);
                by_key.try_emplace(canonical_key(st.h()), std::move(st));
            }
    std::vector<Step> out;
    for (auto& [k, st] : by_key) out.push_back(std::move(st));
    return out;
}

struct Derivation {
    Presheaf start;
    std::vector<Step> steps;

    const Presheaf& end() const { return steps.empty() ? start : steps.back().h(); }
};

struct SearchLimits {
    int max_depth = 3;
    int max_states = 200000;
};

// Breadth-first search over canonical states. `expand` yields (successor,
// edge) pairs; returns the edge path to the first state whose key is `goal`.
template <class State, class Edge, class KeyFn, class ExpandFn, class EndFn>
std::optional<std::vector<Edge>> bfs_path(const State& start, const std::string& goal, KeyFn key, ExpandFn expand,
                                          EndFn end_of, const SearchLimits& lim) {
    struct Node {
        State state;
        int parent;
        std::optional<Edge> edge;
        int depth;
    };
    std::vector<Node> nodes{{start, -1, std::nullopt, 0}};
    std::unordered_map<std::string, int> seen{{key(start), 0}};
    auto path_to = [&](int i) {
        std::vector<Edge> out;
        for (; nodes[i].parent >= 0; i = nodes[i].parent) out.push_back(*nodes[i].edge);
        std::reverse(out.begin(), out.end());
        return out;
    };
    if (key(start) == goal) return path_to(0);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].depth >= lim.max_depth) continue;
        const int depth = nodes[i].depth;
        for (auto& e : expand(nodes[i].state)) {
            State next = end_of(e);
            auto k = key(next);
            if (!seen.emplace(k, static_cast<int>(nodes.size())).second) continue;
            nodes.push_back({std::move(next), static_cast<int>(i), std::move(e), depth + 1});
            if (k == goal) return path_to(static_cast<int>(nodes.size()) - 1);
            if (static_cast<int>(nodes.size()) >= lim.max_states)
                throw Error("SearchLimit", "more than " + std::to_string(lim.max_states) + " states");
        }
    }
    return std::nullopt;
}

// Shortest derivation g =>* h' with h' isomorphic to h.
inline std::optional<Derivation> derivation_search(const Grammar& gr, const Presheaf& g, const Presheaf& h,
                                                   SearchLimits lim = {}) {
    auto path = bfs_path<Presheaf, Step>(
        g, canonical_key(h), [](const Presheaf& x) { return canonical_key(x); },
        [&](const Presheaf& x) { return one_step(gr, x); }, [](const Step& s) { return s.h(); }, lim);
    if (!path) return std::nullopt;
    return Derivation{g, std::move(*path)};
}

// Every isomorphism class reachable from g within the depth bound, by key.
inline std::map<std::string, Presheaf> reachable(const Grammar& gr, const Presheaf& g, int depth) {
    std::map<std::string, Presheaf> seen{{canonical_key(g), g}};
    std::vector<Presheaf> frontier{g};
    for (int d = 0; d < depth && !frontier.empty(); ++d) {
        std::vector<Presheaf> next;
        for (const auto& x : frontier)
            for (const auto& st : one_step(gr, x))
                if (seen.emplace(canonical_key(st.h()), st.h()).second) next.push_back(st.h());
        frontier = std::move(next);
    }
    return seen;
}

inline bool verify_derivation(const Grammar& gr, const Derivation& d) {
    Presheaf cur = d.start;
    for (const auto& st : d.steps) {
        if (!(st.g() == cur)) return false;
        try {
            if (!verify_step(gr.rule(st.rule), st)) return false;
        } catch (const Error&) {
            return false;
        }
        cur = st.h();
    }
    return true;
}

// Runs d1 on the left summand of g1 + g2 and then d2 on the right summand,
// carrying the injections through each step.
inline Derivation tensor_derivations(const Grammar& gr, const Derivation& d1, const Derivation& d2) {
    auto co = coproduct(d1.start, d2.start);
    Derivation out{co.apex, {}};
    Morphism inj_a = co.inl, inj_b = co.inr;
    auto run = [&](const Derivation& d, Morphism& active, Morphism& passive) {
        for (const auto& st : d.steps) {
            const Rule& rule = gr.rule(st.rule);
            Step next = apply_rule(rule, compose(active, st.match));
            // the old complement sits inside the new one
            Morphism dd = factor_through_mono(compose(active, st.d_to_g), next.d_to_g);
            auto old_po = pushout(rule.leg_r, st.k_to_d);
            active = old_po.factorize(next.r_to_h, compose(next.d_to_h, dd));
            passive = compose(next.d_to_h, factor_through_mono(passive, next.d_to_g));
            out.steps.push_back(std::move(next));
        }
    };
    run(d1, inj_a, inj_b);
    run(d2, inj_b, inj_a);
    return out;
}

// ---- rewriting open systems with the feet held fixed ----

// The complement must contain the leg images, so the legs factor through d.
struct OpenStep {
    Step step;
    Cospan before;
    Cospan after;
};

inline std::optional<OpenStep> apply_open_with(const Rule& rule, const Morphism& match, const Complement& c,
                                               const Cospan& x) {
    const int n = x.iface->sort();
    std::vector<int> back(x.apex.size(n), -1);
    for (int e = 0; e < c.d.size(n); ++e) back[c.d_to_g.comp[n][e]] = e;
    auto lift = [&](const std::vector<int>& pts) -> std::optional<std::vector<int>> {
        std::vector<int> out;
        for (int p : pts) {
            if (back[p] < 0) return std::nullopt;
            out.push_back(back[p]);
        }
        return out;
    };
    auto l = lift(x.lleg), r = lift(x.rleg);
    if (!l || !r) return std::nullopt;
    Step st = apply_with_complement(rule, match, c);
    Cospan after{x.iface, x.left, x.right, st.h(), map_points(st.d_to_h, n, *l), map_points(st.d_to_h, n, *r)};
    return OpenStep{std::move(st), x, checked(std::move(after))};
}

inline std::vector<Morphism> find_open_matches(const Rule& rule, const Cospan& x, bool monic) {
    std::vector<Morphism> out;
    for (auto& m : hom_enumerate(rule.l(), x.apex, monic)) {
        auto cs = complements_for(rule, m);
        if (cs.size() == 1 && apply_open_with(rule, m, cs.front(), x)) out.push_back(std::move(m));
    }
    return out;
}

inline OpenStep apply_open(const Rule& rule, const Morphism& match, const Cospan& x) {
    auto cs = complements_for(rule, match);
    if (cs.empty()) throw Error("GluingViolation", rule.name + ": " + gluing_problem(rule.leg_l, match));
    if (cs.size() > 1) throw Error("AmbiguousComplement", rule.name + ": several complements");
    auto st = apply_open_with(rule, match, cs.front(), x);
    if (!st) throw Error("InterfaceViolation", rule.name + ": the rewrite would delete an interface point");
    return *st;
}

inline std::vector<OpenStep> one_step_open(const Grammar& gr, const Cospan& x) {
    std::map<std::string, OpenStep> by_key;
    for (const auto& rule : gr.rules)
        for (const auto& m : find_open_matches(rule, x, gr.monic_matches)) {
            auto st = apply_open(rule, m, x);
            by_key.try_emplace(cospan_key(st.after), std::move(st));
        }
    std::vector<OpenStep> out;
    for (auto& [k, st] : by_key) out.push_back(std::move(st));
    return out;
}

struct OpenDerivation {
    Cospan start;
    std::vector<OpenStep> steps;

    const Cospan& end() const { return steps.empty() ? start : steps.back().after; }
};

inline std::optional<OpenDerivation> open_derivation_search(const Grammar& gr, const Cospan& from, const Cospan& to,
                                                            SearchLimits lim = {}) {
    auto path = bfs_path<Cospan, OpenStep>(
        from, cospan_key(to), [](const Cospan& c) { return cospan_key(c); },
        [&](const Cospan& c) { return one_step_open(gr, c); }, [](const OpenStep& s) { return s.after; }, lim);
    if (!path) return std::nullopt;
    return OpenDerivation{from, std::move(*path)};
}

inline bool verify_open_derivation(const Grammar& gr, const OpenDerivation& d) {
    Cospan cur = d.start;
    for (const auto& st : d.steps) {
        if (!(st.before == cur) || !(st.step.g() == cur.apex)) return false;
        try {
            if (!verify_step(gr.rule(st.step.rule), st.step)) return false;
        } catch (const Error&) {
            return false;
        }
        // legs are carried through d
        const int n = cur.iface->sort();
        for (std::size_t i = 0; i < cur.lleg.size(); ++i) {
            bool found = false;
            for (int e = 0; e < st.step.d().size(n); ++e)
                if (st.step.d_to_g.comp[n][e] == cur.lleg[i]) found = st.step.d_to_h.comp[n][e] == st.after.lleg[i];
            if (!found) return false;
        }
        for (std::size_t i = 0; i < cur.rleg.size(); ++i) {
            bool found = false;
            for (int e = 0; e < st.step.d().size(n); ++e)
                if (st.step.d_to_g.comp[n][e] == cur.rleg[i]) found = st.step.d_to_h.comp[n][e] == st.after.rleg[i];
            if (!found) return false;
        }
        cur = st.after;
    }
    return true;
}

// ---- sample grammars ----

// l = node with a loop, k = r = node.
inline Rule loop_rule() {
    auto l = make_graph(1, {{0, 0}});
    auto k = make_graph(1, {});
    return make_rule("loop", RuleKind::fine, Morphism{k, l, {{}, {0}}}, identity(k));
}

// l = edge, k = its two endpoints, r = one node (bold).
inline Rule edge_contraction_rule() {
    auto l = make_graph(2, {{0, 1}});
    auto k = make_graph(2, {});
    auto r = make_graph(1, {});
    return make_rule("edge", RuleKind::bold, Morphism{k, l, {{}, {0, 1}}}, Morphism{k, r, {{}, {0, 0}}});
}

// l = edge, k = its two endpoints, r = two nodes (fine edge deletion).
inline Rule edge_deletion_rule() {
    auto l = make_graph(2, {{0, 1}});
    auto k = make_graph(2, {});
    return make_rule("edge-delete", RuleKind::fine, Morphism{k, l, {{}, {0, 1}}}, identity(k));
}

// l = node, k = r = empty: fails on any node with an incident edge.
inline Rule node_deletion_rule() {
    auto l = make_graph(1, {});
    Presheaf e(GRAPH());
    return make_rule("node-delete", RuleKind::fine, initial_map(l), identity(e));
}

inline Grammar loop_grammar() { return {graph_interface(), {loop_rule()}, false}; }
inline Grammar edge_grammar() { return {graph_interface(), {edge_contraction_rule()}, false}; }

} // namespace opensys
