#pragma once

#include "canonical.hpp"
#include "hom.hpp"

namespace opensys {

struct CoproductResult {
    Presheaf apex;
    Morphism inl;
    Morphism inr;

    // [p, q]: x + y -> z
    Morphism copair(const Morphism& p, const Morphism& q) const {
        Morphism m{apex, p.dst, {}};
        for (int s = 0; s < apex.schema().sort_count(); ++s) {
            m.comp.push_back(p.comp[s]);
            m.comp[s].insert(m.comp[s].end(), q.comp[s].begin(), q.comp[s].end());
        }
        return m;
    }
};

inline CoproductResult coproduct(const Presheaf& x, const Presheaf& y) {
    require_same_schema(x, y, "coproduct");
    const Schema& c = x.schema();
    std::vector<int> sizes(c.sort_count());
    std::vector<std::vector<int>> act(c.arrow_count());
    std::vector<std::vector<std::string>> labels(c.sort_count());
    Morphism inl{x, x, {}}, inr{y, y, {}};
    for (int s = 0; s < c.sort_count(); ++s) {
        sizes[s] = x.size(s) + y.size(s);
        inl.comp.emplace_back(x.size(s));
        inr.comp.emplace_back(y.size(s));
        std::iota(inl.comp[s].begin(), inl.comp[s].end(), 0);
        std::iota(inr.comp[s].begin(), inr.comp[s].end(), x.size(s));
        if (x.labeled() || y.labeled()) {
            auto a = x.sort_labels(s), b = y.sort_labels(s);
            labels[s] = a;
            labels[s].insert(labels[s].end(), b.begin(), b.end());
        }
    }
    for (int a = 0; a < c.arrow_count(); ++a) {
        act[a] = x.action(a);
        const int off = x.size(c.arrows[a].dst);
        for (int v : y.action(a)) act[a].push_back(v + off);
    }
    Presheaf apex(x.schema_ref(), sizes, act, labels);
    inl.dst = apex;
    inr.dst = apex;
    return {apex, inl, inr};
}

// Pushout of x <-f- a -g-> y. Apex elements are the classes of the
// generated equivalence on x + y, ordered by least member (x first).
struct PushoutResult {
    Presheaf apex;
    Morphism leg_left;   // x -> apex
    Morphism leg_right;  // y -> apex
    Morphism f, g;

    Morphism factorize(const Morphism& p, const Morphism& q) const {
        if (!(p.src == leg_left.src) || !(q.src == leg_right.src) || !(p.dst == q.dst))
            throw Error("NotACocone", "cocone legs have the wrong endpoints");
        if (!(compose(p, f).comp == compose(q, g).comp))
            throw Error("NotCommuting", "cocone does not commute with the span");
        const Schema& c = apex.schema();
        Morphism m{apex, p.dst, {}};
        for (int s = 0; s < c.sort_count(); ++s) {
            m.comp.emplace_back(apex.size(s), -1);
            for (int e = 0; e < leg_left.src.size(s); ++e) m.comp[s][leg_left.comp[s][e]] = p.comp[s][e];
            for (int e = 0; e < leg_right.src.size(s); ++e) m.comp[s][leg_right.comp[s][e]] = q.comp[s][e];
        }
        return m;
    }
};

inline PushoutResult pushout(const Morphism& f, const Morphism& g) {
    if (!(f.src == g.src)) throw Error("SpanMismatch", "pushout legs have different sources");
    require_same_schema(f.dst, g.dst, "pushout");
    const Presheaf& x = f.dst;
    const Presheaf& y = g.dst;
    const Schema& c = x.schema();
    const int ns = c.sort_count();
    std::vector<std::vector<int>> cls(ns);
    std::vector<int> sizes(ns);
    std::vector<std::vector<int>> rep(ns);
    for (int s = 0; s < ns; ++s) {
        const int n = x.size(s) + y.size(s);
        std::vector<int> parent(n);
        std::iota(parent.begin(), parent.end(), 0);
        std::function<int(int)> find = [&](int a) { return parent[a] == a ? a : parent[a] = find(parent[a]); };
        for (int e = 0; e < f.src.size(s); ++e) {
            int a = find(f.comp[s][e]), b = find(x.size(s) + g.comp[s][e]);
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
        cls[s].assign(n, -1);
        for (int u = 0; u < n; ++u) {
            const int r = find(u);
            if (cls[s][r] < 0) {
                cls[s][r] = static_cast<int>(rep[s].size());
                rep[s].push_back(u);
            }
            cls[s][u] = cls[s][r];
        }
        sizes[s] = static_cast<int>(rep[s].size());
    }
    // element u of x + y in sort s
    auto act_on = [&](int a, int u) {
        const int s = c.arrows[a].src, d = c.arrows[a].dst;
        return u < x.size(s) ? x.act(a, u) : x.size(d) + y.act(a, u - x.size(s));
    };
    auto label_of = [&](int s, int u) -> const std::string& {
        return u < x.size(s) ? x.label(s, u) : y.label(s, u - x.size(s));
    };
    std::vector<std::vector<int>> act(c.arrow_count());
    for (int a = 0; a < c.arrow_count(); ++a) {
        const int s = c.arrows[a].src, d = c.arrows[a].dst;
        for (int k = 0; k < sizes[s]; ++k) act[a].push_back(cls[d][act_on(a, rep[s][k])]);
    }
    std::vector<std::vector<std::string>> labels(ns);
    if (x.labeled() || y.labeled())
        for (int s = 0; s < ns; ++s)
            for (int k = 0; k < sizes[s]; ++k) labels[s].push_back(label_of(s, rep[s][k]));
    Presheaf apex(x.schema_ref(), sizes, act, labels);
    Morphism l{x, apex, {}}, r{y, apex, {}};
    for (int s = 0; s < ns; ++s) {
        l.comp.emplace_back(x.size(s));
        r.comp.emplace_back(y.size(s));
        for (int e = 0; e < x.size(s); ++e) l.comp[s][e] = cls[s][e];
        for (int e = 0; e < y.size(s); ++e) r.comp[s][e] = cls[s][x.size(s) + e];
    }
    return {apex, l, r, f, g};
}

// Pullback of x -f-> a <-g- y. Apex elements are agreeing pairs in
// lexicographic order.
struct PullbackResult {
    Presheaf apex;
    Morphism proj_left;   // apex -> x
    Morphism proj_right;  // apex -> y
    Morphism f, g;
    std::vector<std::map<std::pair<int, int>, int>> index;

    Morphism factorize(const Morphism& p, const Morphism& q) const {
        if (!(p.dst == f.src) || !(q.dst == g.src) || !(p.src == q.src))
            throw Error("NotACone", "cone legs have the wrong endpoints");
        if (!(compose(f, p).comp == compose(g, q).comp))
            throw Error("NotCommuting", "cone does not commute with the cospan");
        Morphism m{p.src, apex, {}};
        for (int s = 0; s < apex.schema().sort_count(); ++s) {
            m.comp.emplace_back(p.src.size(s));
            for (int e = 0; e < p.src.size(s); ++e) m.comp[s][e] = index[s].at({p.comp[s][e], q.comp[s][e]});
        }
        return m;
    }
};

inline PullbackResult pullback(const Morphism& f, const Morphism& g) {
    if (!(f.dst == g.dst)) throw Error("CospanMismatch", "pullback legs have different targets");
    require_same_schema(f.src, g.src, "pullback");
    const Presheaf& x = f.src;
    const Presheaf& y = g.src;
    const Schema& c = x.schema();
    const int ns = c.sort_count();
    std::vector<std::vector<std::pair<int, int>>> pairs(ns);
    std::vector<std::map<std::pair<int, int>, int>> index(ns);
    std::vector<int> sizes(ns);
    for (int s = 0; s < ns; ++s) {
        for (int u = 0; u < x.size(s); ++u)
            for (int v = 0; v < y.size(s); ++v)
                if (f.comp[s][u] == g.comp[s][v]) {
                    index[s][{u, v}] = static_cast<int>(pairs[s].size());
                    pairs[s].emplace_back(u, v);
                }
        sizes[s] = static_cast<int>(pairs[s].size());
    }
    std::vector<std::vector<int>> act(c.arrow_count());
    for (int a = 0; a < c.arrow_count(); ++a) {
        const int s = c.arrows[a].src, d = c.arrows[a].dst;
        for (auto [u, v] : pairs[s]) act[a].push_back(index[d].at({x.act(a, u), y.act(a, v)}));
    }
    std::vector<std::vector<std::string>> labels(ns);
    if (x.labeled())
        for (int s = 0; s < ns; ++s)
            for (auto [u, v] : pairs[s]) labels[s].push_back(x.label(s, u));
    Presheaf apex(x.schema_ref(), sizes, act, labels);
    Morphism pl{apex, x, {}}, pr{apex, y, {}};
    for (int s = 0; s < ns; ++s) {
        pl.comp.emplace_back();
        pr.comp.emplace_back();
        for (auto [u, v] : pairs[s]) {
            pl.comp[s].push_back(u);
            pr.comp[s].push_back(v);
        }
    }
    return {apex, pl, pr, f, g, index};
}

// ---- subobjects ----

struct Subobject {
    Presheaf target;
    Subset members;

    Morphism inclusion() const { return subpresheaf(target, members); }
    bool operator==(const Subobject& o) const { return target == o.target && members == o.members; }
    bool operator<(const Subobject& o) const { return members < o.members; }
};

inline Subobject subobject_of(const Morphism& mono) {
    if (!mono.is_mono()) throw Error("NotMonic", "subobject from a non-monic map");
    return {mono.dst, image(mono)};
}

// All action-closed subsets, each once.
inline std::vector<Subobject> sub_enumerate(const Presheaf& x) {
    const Schema& c = x.schema();
    std::vector<std::pair<int, int>> elems;
    for (int s = 0; s < c.sort_count(); ++s)
        for (int e = 0; e < x.size(s); ++e) elems.emplace_back(s, e);
    // closure of each single element
    std::vector<Subset> cl;
    for (auto [s, e] : elems) {
        Subset one = empty_subset(x);
        one[s][e] = 1;
        cl.push_back(closure(x, one));
    }
    std::vector<Subobject> out;
    Subset in = empty_subset(x), out_set = empty_subset(x);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == elems.size()) {
            out.push_back({x, in});
            return;
        }
        auto [s, e] = elems[i];
        if (in[s][e] || out_set[s][e]) {
            // already decided by an earlier closure; an excluded element could
            // only have been excluded explicitly at its own index
            rec(i + 1);
            return;
        }
        // include e and its closure, unless that hits an excluded element
        bool ok = true;
        for (int t = 0; t < c.sort_count() && ok; ++t)
            for (int k = 0; k < x.size(t); ++k)
                if (cl[i][t][k] && out_set[t][k]) {
                    ok = false;
                    break;
                }
        if (ok) {
            Subset saved = in;
            for (int t = 0; t < c.sort_count(); ++t)
                for (int k = 0; k < x.size(t); ++k)
                    if (cl[i][t][k]) in[t][k] = 1;
            rec(i + 1);
            in = std::move(saved);
        }
        out_set[s][e] = 1;
        rec(i + 1);
        out_set[s][e] = 0;
    };
    rec(0);
    std::sort(out.begin(), out.end());
    return out;
}

inline void require_same_target(const Subobject& a, const Subobject& b) {
    if (!(a.target == b.target)) throw Error("TargetMismatch", "subobjects of different presheaves");
}

// Meet as a pullback of the two inclusions, read back as an image.
inline Subobject sub_meet(const Subobject& a, const Subobject& b) {
    require_same_target(a, b);
    auto pb = pullback(a.inclusion(), b.inclusion());
    return {a.target, image(compose(a.inclusion(), pb.proj_left))};
}

// Join as the pushout over the meet, embedded back into the target.
inline Subobject sub_join(const Subobject& a, const Subobject& b) {
    require_same_target(a, b);
    auto ia = a.inclusion(), ib = b.inclusion();
    auto pb = pullback(ia, ib);
    auto po = pushout(pb.proj_left, pb.proj_right);
    auto into = po.factorize(ia, ib);
    return {a.target, image(into)};
}

inline Subobject sub_top(const Presheaf& x) { return {x, full_subset(x)}; }
inline Subobject sub_bottom(const Presheaf& x) { return {x, empty_subset(x)}; }

// ---- pushout complements ----

struct Complement {
    Presheaf d;
    Morphism k_to_d;
    Morphism d_to_g;
};

// Why a candidate complement failed, for error reporting.
inline std::string gluing_problem(const Morphism& left, const Morphism& match) {
    const Presheaf& g = match.dst;
    const Schema& c = g.schema();
    Subset keep = image(compose(match, left));
    Subset matched = image(match);
    for (int a = 0; a < c.arrow_count(); ++a) {
        const int s = c.arrows[a].src, d = c.arrows[a].dst;
        for (int e = 0; e < g.size(s); ++e) {
            const bool in_d = keep[s][e] || !matched[s][e];
            const int t = g.act(a, e);
            const bool t_in_d = keep[d][t] || !matched[d][t];
            if (in_d && !t_in_d)
                return "dangling: " + c.sorts[s] + " " + std::to_string(e) + " would lose its " +
                       c.arrows[a].name + "-image";
        }
    }
    return "identification: the match merges elements that the rule deletes";
}

// For a monic left leg k -> l and any match l -> g: the candidate
// d = image(k) U (g minus image(l)), checked for closure and then checked by
// recomputing the pushout.
inline std::optional<Complement> pushout_complement(const Morphism& left, const Morphism& match) {
    if (!left.is_mono()) throw Error("NotMonic", "left leg of the rule must be monic");
    if (!(left.dst == match.src)) throw Error("NotComposable", "match does not start at the rule's left side");
    const Presheaf& g = match.dst;
    const Schema& c = g.schema();
    Morphism km = compose(match, left);
    Subset keep = image(km);
    Subset matched = image(match);
    Subset cand = empty_subset(g);
    for (int s = 0; s < c.sort_count(); ++s)
        for (int e = 0; e < g.size(s); ++e) cand[s][e] = keep[s][e] || !matched[s][e];
    if (!is_closed(g, cand)) return std::nullopt;
    Morphism incl = subpresheaf(g, cand);
    Morphism kd = factor_through_mono(km, incl);
    kd.src = left.src;
    auto po = pushout(left, kd);
    Morphism cmp = po.factorize(match, incl);
    if (!cmp.is_iso()) return std::nullopt;
    return Complement{incl.src, kd, incl};
}

// Exhaustive variant for arbitrary left legs: every subobject D of g through
// which k -> g factors and whose pushout with the rule recovers g. Results are
// deduplicated up to isomorphism under k.
inline std::vector<Complement> all_pushout_complements(const Morphism& left, const Morphism& match) {
    const Presheaf& g = match.dst;
    Morphism km = compose(match, left);
    Subset keep = image(km);
    std::vector<Complement> out;
    std::set<std::string> seen;
    for (const auto& sub : sub_enumerate(g)) {
        bool contains = true;
        for (std::size_t s = 0; s < keep.size() && contains; ++s)
            for (std::size_t e = 0; e < keep[s].size(); ++e)
                if (keep[s][e] && !sub.members[s][e]) {
                    contains = false;
                    break;
                }
        if (!contains) continue;
        Morphism incl = sub.inclusion();
        Morphism kd = factor_through_mono(km, incl);
        kd.src = left.src;
        auto po = pushout(left, kd);
        if (!po.factorize(match, incl).is_iso()) continue;
        // key: d decorated with the k-elements hitting each element
        std::vector<std::vector<std::string>> lab(incl.src.schema().sort_count());
        for (int s = 0; s < incl.src.schema().sort_count(); ++s) {
            lab[s].assign(incl.src.size(s), "");
            for (int e = 0; e < incl.src.size(s); ++e) lab[s][e] = incl.src.label(s, e) + "/";
            for (int e = 0; e < left.src.size(s); ++e) lab[s][kd.comp[s][e]] += std::to_string(e) + ",";
        }
        if (!seen.insert(canonical_key(relabel(incl.src, lab))).second) continue;
        out.push_back({incl.src, kd, incl});
    }
    return out;
}

} // namespace opensys
