#pragma once

#include "error.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace opensys {

// Arrows are stored in the direction of the presheaf action: an arrow
// s: e -> n of GRAPH sends each edge to its source node. A presheaf on
// the category C is then a covariant assignment along these arrows.
struct Arrow {
    std::string name;
    int src = 0;
    int dst = 0;
};

inline constexpr int kId = -1;
inline constexpr int kNone = -2;

class Schema {
public:
    std::string name;
    std::vector<std::string> sorts;
    std::vector<Arrow> arrows;
    // table[f][g] is the arrow equal to "act by f, then by g", kId for an
    // identity, kNone when f and g are not composable.
    std::vector<std::vector<int>> table;

    int sort_count() const { return static_cast<int>(sorts.size()); }
    int arrow_count() const { return static_cast<int>(arrows.size()); }

    std::optional<int> find_sort(const std::string& s) const {
        for (int i = 0; i < sort_count(); ++i)
            if (sorts[i] == s) return i;
        return std::nullopt;
    }
    std::optional<int> find_arrow(const std::string& a) const {
        for (int i = 0; i < arrow_count(); ++i)
            if (arrows[i].name == a) return i;
        return std::nullopt;
    }
    int sort_index(const std::string& s) const {
        auto i = find_sort(s);
        if (!i) throw Error("UnknownSort", s);
        return *i;
    }
    int arrow_index(const std::string& a) const {
        auto i = find_arrow(a);
        if (!i) throw Error("UnknownArrow", a);
        return *i;
    }

    int src(int f, int sort_if_id) const { return f == kId ? sort_if_id : arrows[f].src; }
    int dst(int f, int sort_if_id) const { return f == kId ? sort_if_id : arrows[f].dst; }

    // f then g, with identities allowed on either side.
    int then(int f, int g) const {
        if (f == kId) return g;
        if (g == kId) return f;
        return table[f][g];
    }

    std::vector<int> arrows_from(int s) const {
        std::vector<int> out;
        for (int a = 0; a < arrow_count(); ++a)
            if (arrows[a].src == s) out.push_back(a);
        return out;
    }
    std::vector<int> arrows_into(int s) const {
        std::vector<int> out;
        for (int a = 0; a < arrow_count(); ++a)
            if (arrows[a].dst == s) out.push_back(a);
        return out;
    }

    bool operator==(const Schema& o) const {
        if (sorts != o.sorts || table != o.table || arrows.size() != o.arrows.size()) return false;
        for (std::size_t i = 0; i < arrows.size(); ++i)
            if (arrows[i].name != o.arrows[i].name || arrows[i].src != o.arrows[i].src ||
                arrows[i].dst != o.arrows[i].dst)
                return false;
        return true;
    }
};

using SchemaRef = std::shared_ptr<const Schema>;

inline bool same_schema(const SchemaRef& a, const SchemaRef& b) {
    return a == b || (a && b && *a == *b);
}

inline std::vector<Violation> validate_schema(const Schema& c) {
    std::vector<Violation> out;
    const int n = c.arrow_count();
    for (const auto& a : c.arrows)
        if (a.src < 0 || a.src >= c.sort_count() || a.dst < 0 || a.dst >= c.sort_count())
            out.push_back({"UnknownSort", "arrow " + a.name + " has an endpoint outside the sort list"});
    if (!out.empty()) return out;
    if (static_cast<int>(c.table.size()) != n) {
        out.push_back({"BadTable", "composition table has wrong size"});
        return out;
    }
    for (int f = 0; f < n; ++f) {
        if (static_cast<int>(c.table[f].size()) != n) {
            out.push_back({"BadTable", "composition table row " + c.arrows[f].name + " has wrong size"});
            return out;
        }
        for (int g = 0; g < n; ++g) {
            const int h = c.table[f][g];
            const bool composable = c.arrows[f].dst == c.arrows[g].src;
            const std::string pair = "(" + c.arrows[f].name + "," + c.arrows[g].name + ")";
            if (!composable) {
                if (h != kNone) out.push_back({"BadTable", "entry for non-composable pair " + pair});
                continue;
            }
            if (h == kNone) {
                out.push_back({"MissingComposite", "no composite for " + pair});
            } else if (h == kId) {
                if (c.arrows[f].src != c.arrows[g].dst)
                    out.push_back({"BadTable", "identity composite with distinct endpoints for " + pair});
            } else if (h < 0 || h >= n || c.arrows[h].src != c.arrows[f].src ||
                       c.arrows[h].dst != c.arrows[g].dst) {
                out.push_back({"BadTable", "ill-typed composite for " + pair});
            }
        }
    }
    if (!out.empty()) return out;
    // associativity over all composable triples
    for (int f = 0; f < n; ++f)
        for (int g = 0; g < n; ++g) {
            if (c.arrows[f].dst != c.arrows[g].src) continue;
            for (int h = 0; h < n; ++h) {
                if (c.arrows[g].dst != c.arrows[h].src) continue;
                const int left = c.then(c.table[f][g], h);
                const int right = c.then(f, c.table[g][h]);
                if (left != right)
                    out.push_back({"NotAssociative", "(" + c.arrows[f].name + "," + c.arrows[g].name + "," +
                                                         c.arrows[h].name + ")"});
            }
        }
    return out;
}

// Builds and validates a schema from names. Each composition entry
// {f, g, h} reads "acting by f and then by g equals acting by h"; h may be
// "id".
inline SchemaRef make_schema(std::string name, std::vector<std::string> sorts,
                             const std::vector<std::tuple<std::string, std::string, std::string>>& arrows,
                             const std::vector<std::tuple<std::string, std::string, std::string>>& comps) {
    auto c = std::make_shared<Schema>();
    c->name = std::move(name);
    c->sorts = std::move(sorts);
    for (const auto& [a, s, d] : arrows) {
        auto si = c->find_sort(s);
        auto di = c->find_sort(d);
        if (!si || !di) throw Error("UnknownSort", "arrow " + a + " refers to " + (si ? d : s));
        if (c->find_arrow(a)) throw Error("DuplicateArrow", a);
        c->arrows.push_back({a, *si, *di});
    }
    const int n = c->arrow_count();
    c->table.assign(n, std::vector<int>(n, kNone));
    for (const auto& [f, g, h] : comps) {
        const int fi = c->arrow_index(f), gi = c->arrow_index(g);
        c->table[fi][gi] = (h == "id") ? kId : c->arrow_index(h);
    }
    auto v = validate_schema(*c);
    if (!v.empty()) throw Error(v.front().code, v.front().detail);
    return c;
}

inline SchemaRef SET() {
    static const SchemaRef s = make_schema("SET", {"x"}, {}, {});
    return s;
}

inline SchemaRef GRAPH() {
    static const SchemaRef s = make_schema("GRAPH", {"e", "n"}, {{"s", "e", "n"}, {"t", "e", "n"}}, {});
    return s;
}

// Reflexive graphs: i picks the identity loop of a node. The derived
// endomorphisms is = s;i and it = t;i of the edge sort are listed so the
// arrow set is closed under composition.
inline SchemaRef RGRAPH() {
    static const SchemaRef s = make_schema(
        "RGRAPH", {"e", "n"},
        {{"s", "e", "n"}, {"t", "e", "n"}, {"i", "n", "e"}, {"is", "e", "e"}, {"it", "e", "e"}},
        {{"i", "s", "id"},   {"i", "t", "id"},   {"s", "i", "is"},   {"t", "i", "it"},   {"i", "is", "i"},
         {"i", "it", "i"},   {"is", "s", "s"},   {"is", "t", "s"},   {"it", "s", "t"},   {"it", "t", "t"},
         {"is", "is", "is"}, {"is", "it", "is"}, {"it", "is", "it"}, {"it", "it", "it"}});
    return s;
}

inline SchemaRef builtin_schema(const std::string& name) {
    if (name == "SET") return SET();
    if (name == "GRAPH") return GRAPH();
    if (name == "RGRAPH") return RGRAPH();
    return nullptr;
}

// A finite thin category presented by generating arrows. Used as the
// indexing shape of small diagrams (spans, cospans, squares).
struct Shape {
    SchemaRef schema;
    int generators = 0;                  // arrows [0, generators) are the generators
    std::vector<std::vector<int>> path;  // per arrow, a generator path realising it
};

inline Shape make_shape(std::string name, std::vector<std::string> objects,
                        const std::vector<std::tuple<std::string, std::string, std::string>>& gens) {
    auto c = std::make_shared<Schema>();
    c->name = std::move(name);
    c->sorts = std::move(objects);
    Shape sh;
    std::map<std::pair<int, int>, int> by_ends;
    for (const auto& [a, s, d] : gens) {
        const int si = c->sort_index(s), di = c->sort_index(d);
        by_ends[{si, di}] = c->arrow_count();
        c->arrows.push_back({a, si, di});
        sh.path.push_back({c->arrow_count() - 1});
    }
    sh.generators = c->arrow_count();
    bool grew = true;
    while (grew) {
        grew = false;
        const int n = c->arrow_count();
        for (int f = 0; f < n; ++f)
            for (int g = 0; g < n; ++g) {
                if (c->arrows[f].dst != c->arrows[g].src) continue;
                const int s = c->arrows[f].src, d = c->arrows[g].dst;
                if (s == d) throw Error("BadShape", "shapes must be acyclic");
                if (by_ends.count({s, d})) continue;
                by_ends[{s, d}] = c->arrow_count();
                c->arrows.push_back({c->sorts[s] + ">" + c->sorts[d], s, d});
                auto p = sh.path[f];
                p.insert(p.end(), sh.path[g].begin(), sh.path[g].end());
                sh.path.push_back(p);
                grew = true;
            }
    }
    const int n = c->arrow_count();
    c->table.assign(n, std::vector<int>(n, kNone));
    for (int f = 0; f < n; ++f)
        for (int g = 0; g < n; ++g)
            if (c->arrows[f].dst == c->arrows[g].src) c->table[f][g] = by_ends.at({c->arrows[f].src, c->arrows[g].dst});
    sh.schema = c;
    return sh;
}

inline const Shape& cospan_shape() {
    static const Shape s = make_shape("cospan", {"L", "X", "R"}, {{"l", "L", "X"}, {"r", "R", "X"}});
    return s;
}

inline const Shape& span_shape() {
    static const Shape s = make_shape("span", {"L", "K", "R"}, {{"l", "K", "L"}, {"r", "K", "R"}});
    return s;
}

// Rows top (x), middle (y), bottom (z); columns left foot, apex, right foot.
inline const Shape& square_shape() {
    static const Shape s = make_shape("square", {"TL", "X", "TR", "ML", "Y", "MR", "BL", "Z", "BR"},
                                      {{"xl", "TL", "X"},
                                       {"xr", "TR", "X"},
                                       {"yl", "ML", "Y"},
                                       {"yr", "MR", "Y"},
                                       {"zl", "BL", "Z"},
                                       {"zr", "BR", "Z"},
                                       {"lu", "ML", "TL"},
                                       {"ld", "ML", "BL"},
                                       {"ru", "MR", "TR"},
                                       {"rd", "MR", "BR"},
                                       {"up", "Y", "X"},
                                       {"down", "Y", "Z"}});
    return s;
}

// Product C x S: sorts are pairs, arrows are pairs of (arrow or identity)
// other than (id, id), composed componentwise. A presheaf on it is a
// diagram of shape S of presheaves on C.
struct ProductSchema {
    SchemaRef schema;
    struct Part {
        int x, m, s, o;  // C-arrow (or kId), S-arrow (or kId), source sort, source object
    };
    std::vector<Part> parts;
    int sort_of(int s, int o, int c_sorts) const { return o * c_sorts + s; }
};

inline const ProductSchema& product_schema(const SchemaRef& c, const Shape& shape) {
    static std::mutex mu;
    static std::vector<std::tuple<SchemaRef, const Schema*, std::shared_ptr<ProductSchema>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    for (const auto& [cc, ss, p] : cache)
        if (same_schema(cc, c) && ss == shape.schema.get()) return *p;
    const Schema& S = *shape.schema;
    auto ps = std::make_shared<ProductSchema>();
    auto p = std::make_shared<Schema>();
    p->name = c->name + "*" + S.name;
    for (int o = 0; o < S.sort_count(); ++o)
        for (int s = 0; s < c->sort_count(); ++s) p->sorts.push_back(c->sorts[s] + "|" + S.sorts[o]);
    auto sort_of = [&](int s, int o) { return o * c->sort_count() + s; };
    std::map<std::tuple<int, int, int, int>, int> index;
    auto key = [](int x, int m, int s, int o) {
        return std::make_tuple(x, m, x == kId ? s : kId, m == kId ? o : kId);
    };
    for (int o = 0; o < S.sort_count(); ++o)
        for (int s = 0; s < c->sort_count(); ++s) {
            std::vector<int> xs{kId}, ms{kId};
            for (int a : c->arrows_from(s)) xs.push_back(a);
            for (int a : S.arrows_from(o)) ms.push_back(a);
            for (int x : xs)
                for (int m : ms) {
                    if (x == kId && m == kId) continue;
                    index[key(x, m, s, o)] = static_cast<int>(ps->parts.size());
                    ps->parts.push_back({x, m, s, o});
                    const std::string xn = x == kId ? "id" : c->arrows[x].name;
                    const std::string mn = m == kId ? "id" : S.arrows[m].name;
                    p->arrows.push_back({xn + "|" + mn, sort_of(s, o), sort_of(c->dst(x, s), S.dst(m, o))});
                }
        }
    const int n = static_cast<int>(ps->parts.size());
    p->table.assign(n, std::vector<int>(n, kNone));
    for (int f = 0; f < n; ++f)
        for (int g = 0; g < n; ++g) {
            if (p->arrows[f].dst != p->arrows[g].src) continue;
            const auto& pf = ps->parts[f];
            const int x = c->then(pf.x, ps->parts[g].x), m = S.then(pf.m, ps->parts[g].m);
            p->table[f][g] = (x == kId && m == kId) ? kId : index.at(key(x, m, pf.s, pf.o));
        }
    ps->schema = p;
    cache.emplace_back(c, shape.schema.get(), ps);
    return *ps;
}

} // namespace opensys
