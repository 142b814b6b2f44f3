#pragma once

#include "canonical.hpp"
#include "hom.hpp"

namespace opensys {

// Category of elements of a base presheaf G. One sort per (sort, element of
// G), one arrow per (arrow, element of G). Presheaves over G (morphisms into
// G) correspond to plain presheaves on this schema.
struct ElementSchema {
    Presheaf base;
    SchemaRef schema;
    std::vector<std::vector<int>> sort_of;  // sort_of[s][x]: element sort for x in base(s)
    std::vector<std::pair<int, int>> origin;  // per element sort: (base sort, base element)
};

inline ElementSchema category_of_elements(const Presheaf& base) {
    auto v = validate_presheaf(base);
    if (!v.empty()) throw Error(v.front().code, v.front().detail);
    const Schema& c = base.schema();
    ElementSchema el;
    el.base = base;
    auto sch = std::make_shared<Schema>();
    sch->name = c.name + "/el";
    el.sort_of.resize(c.sort_count());
    for (int s = 0; s < c.sort_count(); ++s)
        for (int x = 0; x < base.size(s); ++x) {
            el.sort_of[s].push_back(sch->sort_count());
            el.origin.emplace_back(s, x);
            const std::string& l = base.label(s, x);
            sch->sorts.push_back(c.sorts[s] + ":" + (l.empty() ? std::to_string(x) : l));
        }
    // arrow (a, x) for x in base(src a)
    std::map<std::pair<int, int>, int> arrow_of;
    for (int a = 0; a < c.arrow_count(); ++a) {
        const int s = c.arrows[a].src, d = c.arrows[a].dst;
        for (int x = 0; x < base.size(s); ++x) {
            arrow_of[{a, x}] = sch->arrow_count();
            sch->arrows.push_back({c.arrows[a].name + "@" + sch->sorts[el.sort_of[s][x]], el.sort_of[s][x],
                                   el.sort_of[d][base.act(a, x)]});
        }
    }
    const int n = sch->arrow_count();
    sch->table.assign(n, std::vector<int>(n, kNone));
    for (auto [fk, fi] : arrow_of)
        for (auto [gk, gi] : arrow_of) {
            if (sch->arrows[fi].dst != sch->arrows[gi].src) continue;
            const int h = c.table[fk.first][gk.first];
            sch->table[fi][gi] = h == kId ? kId : arrow_of.at({h, fk.second});
        }
    auto bad = validate_schema(*sch);
    if (!bad.empty()) throw Error(bad.front().code, bad.front().detail);
    el.schema = sch;
    return el;
}

// A presheaf over the base, i.e. a morphism t: x -> base, as a presheaf on
// the element schema. Fibers keep the element order of x.
inline Presheaf to_elements(const ElementSchema& el, const Morphism& t) {
    if (!(t.dst == el.base)) throw Error("BaseMismatch", "typing map does not land in the base");
    const Schema& c = el.base.schema();
    const Presheaf& x = t.src;
    const int ns = el.schema->sort_count();
    std::vector<int> sizes(ns, 0);
    std::vector<std::vector<int>> pos(c.sort_count());
    std::vector<std::vector<int>> members(ns);
    for (int s = 0; s < c.sort_count(); ++s) {
        pos[s].resize(x.size(s));
        for (int e = 0; e < x.size(s); ++e) {
            const int k = el.sort_of[s][t.comp[s][e]];
            pos[s][e] = sizes[k]++;
            members[k].push_back(e);
        }
    }
    std::vector<std::vector<int>> act(el.schema->arrow_count());
    std::vector<std::vector<std::string>> labels(ns);
    for (int k = 0; k < ns; ++k) {
        auto [s, bx] = el.origin[k];
        (void)bx;
        if (!x.labels()[s].empty())
            for (int e : members[k]) labels[k].push_back(x.label(s, e));
    }
    int ai = 0;
    for (int a = 0; a < c.arrow_count(); ++a) {
        const int s = c.arrows[a].src, d = c.arrows[a].dst;
        for (int bx = 0; bx < el.base.size(s); ++bx, ++ai)
            for (int e : members[el.sort_of[s][bx]]) act[ai].push_back(pos[d][x.act(a, e)]);
    }
    return checked(Presheaf(el.schema, sizes, act, labels));
}

// Inverse direction: concatenates fibers sort by sort.
inline Morphism from_elements(const ElementSchema& el, const Presheaf& p) {
    if (!same_schema(p.schema_ref(), el.schema)) throw Error("SchemaMismatch", "not an element presheaf");
    const Schema& c = el.base.schema();
    std::vector<int> sizes(c.sort_count(), 0);
    std::vector<int> start(el.schema->sort_count(), 0);
    std::vector<std::vector<int>> typing(c.sort_count());
    for (int k = 0; k < el.schema->sort_count(); ++k) {
        auto [s, bx] = el.origin[k];
        start[k] = sizes[s];
        sizes[s] += p.size(k);
        for (int e = 0; e < p.size(k); ++e) typing[s].push_back(bx);
    }
    std::vector<std::vector<int>> act(c.arrow_count());
    for (int a = 0; a < c.arrow_count(); ++a) act[a].assign(sizes[c.arrows[a].src], 0);
    std::vector<std::vector<std::string>> labels(c.sort_count());
    bool any_label = p.labeled();
    for (int s = 0; s < c.sort_count(); ++s)
        if (any_label) labels[s].assign(sizes[s], "");
    int ai = 0;
    for (int a = 0; a < c.arrow_count(); ++a) {
        const int s = c.arrows[a].src, d = c.arrows[a].dst;
        for (int bx = 0; bx < el.base.size(s); ++bx, ++ai) {
            const int k = el.sort_of[s][bx];
            const int kd = el.sort_of[d][el.base.act(a, bx)];
            for (int e = 0; e < p.size(k); ++e) act[a][start[k] + e] = start[kd] + p.act(ai, e);
        }
    }
    if (any_label)
        for (int k = 0; k < el.schema->sort_count(); ++k)
            for (int e = 0; e < p.size(k); ++e) labels[el.origin[k].first][start[k] + e] = p.label(k, e);
    Presheaf x = checked(Presheaf(el.base.schema_ref(), sizes, act, labels));
    return checked(Morphism{x, el.base, typing});
}

// Isomorphism in the slice over the base: an iso of domains commuting with
// the typing maps. Decides it by tagging every element with its type.
inline std::optional<Morphism> typed_iso_search(const Morphism& t1, const Morphism& t2) {
    auto tag = [](const Morphism& t) {
        std::vector<std::vector<std::string>> l(t.src.schema().sort_count());
        for (int s = 0; s < t.src.schema().sort_count(); ++s)
            for (int e = 0; e < t.src.size(s); ++e)
                l[s].push_back(t.src.label(s, e) + "@" + std::to_string(t.comp[s][e]));
        return relabel(t.src, l);
    };
    auto iso = iso_search(tag(t1), tag(t2));
    if (!iso) return std::nullopt;
    return Morphism{t1.src, t2.src, iso->comp};
}

} // namespace opensys
