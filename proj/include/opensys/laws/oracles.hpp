#pragma once

// Brute-force reference computations. Deliberately naive and independent of
// the search code in the library: they enumerate whole function spaces.

#include "../presheaf.hpp"

#include <functional>
#include <random>

namespace oracle {

using opensys::Morphism;
using opensys::Presheaf;
using opensys::Schema;

// Every tuple of component functions x -> y that is natural and preserves
// labels, in lexicographic order of the component tables.
inline std::vector<Morphism> brute_homs(const Presheaf& x, const Presheaf& y, bool monic = false) {
    const Schema& c = x.schema();
    std::vector<std::pair<int, int>> slots;
    for (int s = 0; s < c.sort_count(); ++s)
        for (int e = 0; e < x.size(s); ++e) slots.emplace_back(s, e);
    std::vector<std::vector<int>> comp(c.sort_count());
    for (int s = 0; s < c.sort_count(); ++s) comp[s].assign(x.size(s), 0);
    std::vector<Morphism> out;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == slots.size()) {
            Morphism m{x, y, comp};
            bool ok = true;
            for (int a = 0; a < c.arrow_count() && ok; ++a)
                for (int e = 0; e < x.size(c.arrows[a].src) && ok; ++e)
                    ok = comp[c.arrows[a].dst][x.act(a, e)] == y.act(a, comp[c.arrows[a].src][e]);
            for (int s = 0; s < c.sort_count() && ok; ++s)
                for (int e = 0; e < x.size(s) && ok; ++e) ok = x.label(s, e) == y.label(s, comp[s][e]);
            if (ok && monic) ok = m.is_mono();
            if (ok) out.push_back(m);
            return;
        }
        auto [s, e] = slots[i];
        for (int v = 0; v < y.size(s); ++v) {
            comp[s][e] = v;
            rec(i + 1);
        }
    };
    rec(0);
    return out;
}

// Number of maps u: apex -> z with u . l = p and u . r = q (all functions
// consistent with the legs, then filtered by naturality).
inline int count_mediators(const Morphism& l, const Morphism& r, const Morphism& p, const Morphism& q) {
    const Presheaf& apex = l.dst;
    const Presheaf& z = p.dst;
    const Schema& c = apex.schema();
    std::vector<std::vector<std::vector<int>>> allowed(c.sort_count());
    for (int s = 0; s < c.sort_count(); ++s) {
        allowed[s].assign(apex.size(s), {});
        std::vector<std::vector<int>> forced(apex.size(s));
        for (int e = 0; e < l.src.size(s); ++e) forced[l.comp[s][e]].push_back(p.comp[s][e]);
        for (int e = 0; e < r.src.size(s); ++e) forced[r.comp[s][e]].push_back(q.comp[s][e]);
        for (int e = 0; e < apex.size(s); ++e)
            for (int v = 0; v < z.size(s); ++v) {
                bool ok = true;
                for (int f : forced[e]) ok = ok && f == v;
                if (ok) allowed[s][e].push_back(v);
            }
    }
    std::vector<std::pair<int, int>> slots;
    for (int s = 0; s < c.sort_count(); ++s)
        for (int e = 0; e < apex.size(s); ++e) slots.emplace_back(s, e);
    std::vector<std::vector<int>> comp(c.sort_count());
    for (int s = 0; s < c.sort_count(); ++s) comp[s].assign(apex.size(s), 0);
    int count = 0;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == slots.size()) {
            bool ok = true;
            for (int a = 0; a < c.arrow_count() && ok; ++a)
                for (int e = 0; e < apex.size(c.arrows[a].src) && ok; ++e)
                    ok = comp[c.arrows[a].dst][apex.act(a, e)] == z.act(a, comp[c.arrows[a].src][e]);
            count += ok;
            return;
        }
        auto [s, e] = slots[i];
        for (int v : allowed[s][e]) {
            comp[s][e] = v;
            rec(i + 1);
        }
    };
    rec(0);
    return count;
}

// Number of maps u: w -> apex with pl . u = p and pr . u = q.
inline int count_cone_mediators(const Morphism& pl, const Morphism& pr, const Morphism& p, const Morphism& q) {
    const Presheaf& apex = pl.src;
    const Presheaf& w = p.src;
    const Schema& c = apex.schema();
    std::vector<std::pair<int, int>> slots;
    for (int s = 0; s < c.sort_count(); ++s)
        for (int e = 0; e < w.size(s); ++e) slots.emplace_back(s, e);
    std::vector<std::vector<int>> comp(c.sort_count());
    for (int s = 0; s < c.sort_count(); ++s) comp[s].assign(w.size(s), 0);
    int count = 0;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == slots.size()) {
            bool ok = true;
            for (int a = 0; a < c.arrow_count() && ok; ++a)
                for (int e = 0; e < w.size(c.arrows[a].src) && ok; ++e)
                    ok = comp[c.arrows[a].dst][w.act(a, e)] == apex.act(a, comp[c.arrows[a].src][e]);
            count += ok;
            return;
        }
        auto [s, e] = slots[i];
        for (int v = 0; v < apex.size(s); ++v)
            if (pl.comp[s][v] == p.comp[s][e] && pr.comp[s][v] == q.comp[s][e]) {
                comp[s][e] = v;
                rec(i + 1);
            }
    };
    rec(0);
    return count;
}

// Pointwise pushout test for a commuting square k -> l -> g, k -> d -> g:
// per sort, l + d -> g is onto and identifies exactly the pairs related by
// the equivalence generated by k.
inline bool is_pushout_square(const Morphism& kl, const Morphism& kd, const Morphism& lg, const Morphism& dg) {
    const Schema& c = kl.src.schema();
    for (int s = 0; s < c.sort_count(); ++s) {
        for (int e = 0; e < kl.src.size(s); ++e)
            if (lg.comp[s][kl.comp[s][e]] != dg.comp[s][kd.comp[s][e]]) return false;
        const int nl = kl.dst.size(s), nd = kd.dst.size(s), n = nl + nd;
        std::vector<int> img(n);
        for (int u = 0; u < nl; ++u) img[u] = lg.comp[s][u];
        for (int u = 0; u < nd; ++u) img[nl + u] = dg.comp[s][u];
        std::vector<char> hit(lg.dst.size(s), 0);
        for (int v : img) hit[v] = 1;
        for (char h : hit)
            if (!h) return false;
        // generated equivalence by naive transitive closure
        std::vector<std::vector<char>> rel(n, std::vector<char>(n, 0));
        for (int u = 0; u < n; ++u) rel[u][u] = 1;
        for (int e = 0; e < kl.src.size(s); ++e) {
            const int a = kl.comp[s][e], b = nl + kd.comp[s][e];
            rel[a][b] = rel[b][a] = 1;
        }
        for (int m = 0; m < n; ++m)
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    if (rel[a][m] && rel[m][b]) rel[a][b] = 1;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if ((img[a] == img[b]) != static_cast<bool>(rel[a][b])) return false;
    }
    return true;
}

// All action-closed subsets by filtering the full power set.
inline std::vector<opensys::Subset> brute_subsets(const Presheaf& x) {
    const Schema& c = x.schema();
    std::vector<std::pair<int, int>> elems;
    for (int s = 0; s < c.sort_count(); ++s)
        for (int e = 0; e < x.size(s); ++e) elems.emplace_back(s, e);
    std::vector<opensys::Subset> out;
    const std::size_t n = elems.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        opensys::Subset sub = opensys::empty_subset(x);
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1) sub[elems[i].first][elems[i].second] = 1;
        bool ok = true;
        for (int a = 0; a < c.arrow_count() && ok; ++a)
            for (int e = 0; e < x.size(c.arrows[a].src) && ok; ++e)
                if (sub[c.arrows[a].src][e] && !sub[c.arrows[a].dst][x.act(a, e)]) ok = false;
        if (ok) out.push_back(sub);
    }
    return out;
}

// Random GRAPH with given bounds.
inline Presheaf random_graph(std::mt19937& rng, int max_nodes, int max_edges, bool allow_empty = true,
                             const opensys::SchemaRef& schema = opensys::GRAPH()) {
    const int n = std::uniform_int_distribution<int>(allow_empty ? 0 : 1, max_nodes)(rng);
    const int m = n == 0 ? 0 : std::uniform_int_distribution<int>(0, max_edges)(rng);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < m; ++i)
        edges.emplace_back(std::uniform_int_distribution<int>(0, n - 1)(rng),
                           std::uniform_int_distribution<int>(0, n - 1)(rng));
    return opensys::make_graph(n, edges, {}, schema);
}

// Random presheaf on SET, GRAPH or RGRAPH with at most `bound` elements per sort.
inline Presheaf random_presheaf(std::mt19937& rng, const opensys::SchemaRef& schema, int bound) {
    if (schema->name == "SET") {
        const int n = std::uniform_int_distribution<int>(0, bound)(rng);
        return Presheaf(schema, {n}, {});
    }
    if (schema->name == "RGRAPH") {
        // identity loops count towards the edge bound
        const int n = std::uniform_int_distribution<int>(0, bound)(rng);
        return random_graph(rng, n, std::max(0, bound - n), true, schema);
    }
    return random_graph(rng, bound, bound);
}

// A uniformly chosen morphism among all of them, if any.
inline std::optional<Morphism> random_hom(std::mt19937& rng, const Presheaf& x, const Presheaf& y,
                                          bool monic = false) {
    auto all = brute_homs(x, y, monic);
    if (all.empty()) return std::nullopt;
    return all[std::uniform_int_distribution<std::size_t>(0, all.size() - 1)(rng)];
}

} // namespace oracle
