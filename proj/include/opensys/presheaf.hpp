#pragma once

#include "schema.hpp"

#include <numeric>
#include <string>
#include <utility>
#include <vector>

namespace opensys {

// A finite presheaf: per-sort carriers 0..size-1 and, per arrow, the action
// table. Optional per-element labels type the presheaf over a fixed symbolic
// base (morphisms must preserve them). Values are immutable and cheap to copy.
class Presheaf {
    struct Data {
        SchemaRef schema;
        std::vector<int> size;
        std::vector<std::vector<int>> act;
        std::vector<std::vector<std::string>> label;  // per sort: empty or one label per element
    };

public:
    Presheaf() : Presheaf(SET()) {}

    explicit Presheaf(SchemaRef schema) {
        auto d = std::make_shared<Data>();
        d->size.assign(schema->sort_count(), 0);
        d->act.assign(schema->arrow_count(), {});
        d->label.assign(schema->sort_count(), {});
        d->schema = std::move(schema);
        d_ = std::move(d);
    }

    Presheaf(SchemaRef schema, std::vector<int> sizes, std::vector<std::vector<int>> act,
             std::vector<std::vector<std::string>> labels = {}) {
        auto d = std::make_shared<Data>();
        if (static_cast<int>(sizes.size()) != schema->sort_count())
            throw Error("ShapeMismatch", "carrier count does not match schema " + schema->name);
        if (static_cast<int>(act.size()) != schema->arrow_count())
            throw Error("ShapeMismatch", "action count does not match schema " + schema->name);
        labels.resize(sizes.size());
        for (std::size_t s = 0; s < sizes.size(); ++s) {
            auto& l = labels[s];
            if (!l.empty() && static_cast<int>(l.size()) != sizes[s])
                throw Error("ShapeMismatch", "label count for sort " + schema->sorts[s]);
            if (std::all_of(l.begin(), l.end(), [](const std::string& x) { return x.empty(); })) l.clear();
        }
        d->schema = std::move(schema);
        d->size = std::move(sizes);
        d->act = std::move(act);
        d->label = std::move(labels);
        d_ = std::move(d);
    }

    const Schema& schema() const { return *d_->schema; }
    const SchemaRef& schema_ref() const { return d_->schema; }
    int size(int s) const { return d_->size[s]; }
    const std::vector<int>& sizes() const { return d_->size; }
    int total_size() const { return std::accumulate(d_->size.begin(), d_->size.end(), 0); }
    const std::vector<int>& action(int a) const { return d_->act[a]; }
    const std::vector<std::vector<int>>& actions() const { return d_->act; }
    int act(int a, int x) const { return d_->act[a][x]; }
    // acting by an arrow or identity
    int apply(int a, int x) const { return a == kId ? x : d_->act[a][x]; }

    bool labeled() const {
        return std::any_of(d_->label.begin(), d_->label.end(), [](const auto& l) { return !l.empty(); });
    }
    const std::string& label(int s, int x) const {
        static const std::string none;
        const auto& l = d_->label[s];
        return l.empty() ? none : l[x];
    }
    const std::vector<std::vector<std::string>>& labels() const { return d_->label; }
    std::vector<std::string> sort_labels(int s) const {
        std::vector<std::string> out(size(s));
        for (int x = 0; x < size(s); ++x) out[x] = label(s, x);
        return out;
    }

    bool operator==(const Presheaf& o) const {
        if (d_ == o.d_) return true;
        return same_schema(d_->schema, o.d_->schema) && d_->size == o.d_->size && d_->act == o.d_->act &&
               d_->label == o.d_->label;
    }
    bool operator!=(const Presheaf& o) const { return !(*this == o); }

private:
    std::shared_ptr<const Data> d_;
};

inline void require_same_schema(const Presheaf& a, const Presheaf& b, const char* where) {
    if (!same_schema(a.schema_ref(), b.schema_ref()))
        throw Error("SchemaMismatch", std::string(where) + ": " + a.schema().name + " vs " + b.schema().name);
}

inline std::vector<Violation> validate_presheaf(const Presheaf& p) {
    std::vector<Violation> out;
    const Schema& c = p.schema();
    for (int s = 0; s < c.sort_count(); ++s)
        if (p.size(s) < 0) out.push_back({"NegativeCarrier", c.sorts[s]});
    for (int a = 0; a < c.arrow_count(); ++a) {
        const auto& ar = c.arrows[a];
        if (static_cast<int>(p.action(a).size()) != p.size(ar.src)) {
            out.push_back({"OutOfRangeAction", "arrow " + ar.name + " table has wrong length"});
            continue;
        }
        for (int x = 0; x < p.size(ar.src); ++x) {
            const int y = p.act(a, x);
            if (y < 0 || y >= p.size(ar.dst))
                out.push_back({"OutOfRangeAction", "arrow " + ar.name + " sends " + c.sorts[ar.src] + " " +
                                                       std::to_string(x) + " to " + std::to_string(y)});
        }
    }
    if (!out.empty()) return out;
    for (int f = 0; f < c.arrow_count(); ++f)
        for (int g = 0; g < c.arrow_count(); ++g) {
            const int h = c.table[f][g];
            if (h == kNone) continue;
            for (int x = 0; x < p.size(c.arrows[f].src); ++x) {
                const int lhs = p.act(g, p.act(f, x));
                const int rhs = p.apply(h, x);
                if (lhs != rhs) {
                    out.push_back({"FunctorialityViolation",
                                   "pair (" + c.arrows[f].name + "," + c.arrows[g].name + ") = " +
                                       (h == kId ? std::string("id") : c.arrows[h].name) + " fails at " +
                                       c.sorts[c.arrows[f].src] + " " + std::to_string(x)});
                    break;
                }
            }
        }
    return out;
}

inline Presheaf checked(Presheaf p) {
    auto v = validate_presheaf(p);
    if (!v.empty()) throw Error(v.front().code, v.front().detail);
    return p;
}

// Component-wise map of presheaves. comp[s][x] is the image of element x of
// sort s.
struct Morphism {
    Presheaf src;
    Presheaf dst;
    std::vector<std::vector<int>> comp;

    int operator()(int s, int x) const { return comp[s][x]; }

    bool is_mono() const {
        for (int s = 0; s < src.schema().sort_count(); ++s) {
            std::vector<char> seen(dst.size(s), 0);
            for (int y : comp[s]) {
                if (seen[y]) return false;
                seen[y] = 1;
            }
        }
        return true;
    }
    bool is_epi() const {
        for (int s = 0; s < src.schema().sort_count(); ++s) {
            std::vector<char> seen(dst.size(s), 0);
            for (int y : comp[s]) seen[y] = 1;
            if (std::find(seen.begin(), seen.end(), 0) != seen.end()) return false;
        }
        return true;
    }
    bool is_iso() const { return is_mono() && is_epi(); }

    bool operator==(const Morphism& o) const { return comp == o.comp && src == o.src && dst == o.dst; }
};

inline std::vector<Violation> validate_morphism(const Morphism& m) {
    std::vector<Violation> out;
    if (!same_schema(m.src.schema_ref(), m.dst.schema_ref())) {
        out.push_back({"SchemaMismatch", "morphism endpoints"});
        return out;
    }
    const Schema& c = m.src.schema();
    if (static_cast<int>(m.comp.size()) != c.sort_count()) {
        out.push_back({"ShapeMismatch", "component count"});
        return out;
    }
    for (int s = 0; s < c.sort_count(); ++s) {
        if (static_cast<int>(m.comp[s].size()) != m.src.size(s)) {
            out.push_back({"ShapeMismatch", "component length for sort " + c.sorts[s]});
            return out;
        }
        for (int x = 0; x < m.src.size(s); ++x) {
            const int y = m.comp[s][x];
            if (y < 0 || y >= m.dst.size(s)) {
                out.push_back({"OutOfRangeComponent", c.sorts[s] + " " + std::to_string(x)});
                return out;
            }
            if (m.src.label(s, x) != m.dst.label(s, y))
                out.push_back({"LabelMismatch", c.sorts[s] + " " + std::to_string(x) + " (" + m.src.label(s, x) +
                                                    " vs " + m.dst.label(s, y) + ")"});
        }
    }
    for (int a = 0; a < c.arrow_count(); ++a) {
        const auto& ar = c.arrows[a];
        for (int x = 0; x < m.src.size(ar.src); ++x)
            if (m.comp[ar.dst][m.src.act(a, x)] != m.dst.act(a, m.comp[ar.src][x])) {
                out.push_back({"NotNatural", "arrow " + ar.name + " at " + c.sorts[ar.src] + " " + std::to_string(x)});
                break;
            }
    }
    return out;
}

inline bool is_natural(const Morphism& m) { return validate_morphism(m).empty(); }

inline Morphism checked(Morphism m) {
    auto v = validate_morphism(m);
    if (!v.empty()) throw Error(v.front().code, v.front().detail);
    return m;
}

inline Morphism identity(const Presheaf& x) {
    Morphism m{x, x, {}};
    for (int s = 0; s < x.schema().sort_count(); ++s) {
        m.comp.emplace_back(x.size(s));
        std::iota(m.comp.back().begin(), m.comp.back().end(), 0);
    }
    return m;
}

// g after f
inline Morphism compose(const Morphism& g, const Morphism& f) {
    if (!(f.dst == g.src)) throw Error("NotComposable", "codomain and domain differ");
    Morphism m{f.src, g.dst, {}};
    for (int s = 0; s < f.src.schema().sort_count(); ++s) {
        m.comp.emplace_back(f.src.size(s));
        for (int x = 0; x < f.src.size(s); ++x) m.comp[s][x] = g.comp[s][f.comp[s][x]];
    }
    return m;
}

inline Morphism inverse(const Morphism& m) {
    if (!m.is_iso()) throw Error("NotIso", "inverse of a non-invertible morphism");
    Morphism r{m.dst, m.src, {}};
    for (int s = 0; s < m.src.schema().sort_count(); ++s) {
        r.comp.emplace_back(m.dst.size(s));
        for (int x = 0; x < m.src.size(s); ++x) r.comp[s][m.comp[s][x]] = x;
    }
    return r;
}

// Unique map out of the empty presheaf.
inline Presheaf empty_presheaf(const SchemaRef& c) { return Presheaf(c); }

inline Morphism initial_map(const Presheaf& y) {
    Presheaf e(y.schema_ref());
    return Morphism{e, y, std::vector<std::vector<int>>(y.schema().sort_count())};
}

// ---- sub-presheaves ----

using Subset = std::vector<std::vector<char>>;  // per sort, membership flags

inline Subset empty_subset(const Presheaf& x) {
    Subset s(x.schema().sort_count());
    for (int i = 0; i < x.schema().sort_count(); ++i) s[i].assign(x.size(i), 0);
    return s;
}

inline Subset full_subset(const Presheaf& x) {
    Subset s(x.schema().sort_count());
    for (int i = 0; i < x.schema().sort_count(); ++i) s[i].assign(x.size(i), 1);
    return s;
}

inline bool is_closed(const Presheaf& x, const Subset& sub) {
    const Schema& c = x.schema();
    for (int a = 0; a < c.arrow_count(); ++a)
        for (int e = 0; e < x.size(c.arrows[a].src); ++e)
            if (sub[c.arrows[a].src][e] && !sub[c.arrows[a].dst][x.act(a, e)]) return false;
    return true;
}

// Smallest action-closed subset containing sub.
inline Subset closure(const Presheaf& x, Subset sub) {
    const Schema& c = x.schema();
    bool grew = true;
    while (grew) {
        grew = false;
        for (int a = 0; a < c.arrow_count(); ++a)
            for (int e = 0; e < x.size(c.arrows[a].src); ++e)
                if (sub[c.arrows[a].src][e] && !sub[c.arrows[a].dst][x.act(a, e)]) {
                    sub[c.arrows[a].dst][x.act(a, e)] = 1;
                    grew = true;
                }
    }
    return sub;
}

// The sub-presheaf on a closed subset together with its inclusion. Element
// order is inherited from x.
inline Morphism subpresheaf(const Presheaf& x, const Subset& sub) {
    if (!is_closed(x, sub)) throw Error("NotClosed", "subset is not closed under the schema actions");
    const Schema& c = x.schema();
    std::vector<std::vector<int>> inc(c.sort_count()), back(c.sort_count());
    std::vector<int> sizes(c.sort_count());
    for (int s = 0; s < c.sort_count(); ++s) {
        back[s].assign(x.size(s), -1);
        for (int e = 0; e < x.size(s); ++e)
            if (sub[s][e]) {
                back[s][e] = static_cast<int>(inc[s].size());
                inc[s].push_back(e);
            }
        sizes[s] = static_cast<int>(inc[s].size());
    }
    std::vector<std::vector<int>> act(c.arrow_count());
    for (int a = 0; a < c.arrow_count(); ++a)
        for (int e : inc[c.arrows[a].src]) act[a].push_back(back[c.arrows[a].dst][x.act(a, e)]);
    std::vector<std::vector<std::string>> labels(c.sort_count());
    for (int s = 0; s < c.sort_count(); ++s)
        if (!x.labels()[s].empty())
            for (int e : inc[s]) labels[s].push_back(x.label(s, e));
    Presheaf d(x.schema_ref(), sizes, act, labels);
    return Morphism{d, x, inc};
}

inline Subset image(const Morphism& m) {
    Subset s = empty_subset(m.dst);
    for (std::size_t i = 0; i < m.comp.size(); ++i)
        for (int y : m.comp[i]) s[i][y] = 1;
    return s;
}

// Corestriction of f through a mono m (f must land in the image of m).
inline Morphism factor_through_mono(const Morphism& f, const Morphism& m) {
    Morphism r{f.src, m.src, {}};
    for (int s = 0; s < f.src.schema().sort_count(); ++s) {
        std::vector<int> back(m.dst.size(s), -1);
        for (int x = 0; x < m.src.size(s); ++x) back[m.comp[s][x]] = x;
        r.comp.emplace_back(f.src.size(s));
        for (int x = 0; x < f.src.size(s); ++x) {
            const int y = back[f.comp[s][x]];
            if (y < 0) throw Error("NotFactorizable", "map leaves the image of the mono");
            r.comp[s][x] = y;
        }
    }
    return r;
}

// Replace labels wholesale (used to decorate presheaves for constrained
// isomorphism searches).
inline Presheaf relabel(const Presheaf& x, std::vector<std::vector<std::string>> labels) {
    return Presheaf(x.schema_ref(), x.sizes(), x.actions(), std::move(labels));
}

inline Presheaf strip_labels(const Presheaf& x) { return Presheaf(x.schema_ref(), x.sizes(), x.actions()); }

// ---- graph helpers ----

// Plain GRAPH (or RGRAPH, adding identity loops) from an edge list.
inline Presheaf make_graph(int nodes, const std::vector<std::pair<int, int>>& edges,
                           const std::vector<std::string>& node_labels = {}, const SchemaRef& schema = GRAPH()) {
    const Schema& c = *schema;
    const int e = c.sort_index("e"), n = c.sort_index("n");
    const int s = c.arrow_index("s"), t = c.arrow_index("t");
    std::vector<int> sizes(c.sort_count(), 0);
    std::vector<std::vector<int>> act(c.arrow_count());
    sizes[n] = nodes;
    for (auto [a, b] : edges) {
        act[s].push_back(a);
        act[t].push_back(b);
    }
    if (c.name == "RGRAPH") {
        const int i = c.arrow_index("i");
        for (int v = 0; v < nodes; ++v) {
            act[i].push_back(static_cast<int>(act[s].size()));
            act[s].push_back(v);
            act[t].push_back(v);
        }
        const int is = c.arrow_index("is"), it = c.arrow_index("it");
        for (std::size_t k = 0; k < act[s].size(); ++k) {
            act[is].push_back(act[i][act[s][k]]);
            act[it].push_back(act[i][act[t][k]]);
        }
    }
    sizes[e] = static_cast<int>(act[s].size());
    std::vector<std::vector<std::string>> labels(c.sort_count());
    labels[n] = node_labels;
    return checked(Presheaf(schema, sizes, act, labels));
}

struct GraphView {
    int e, n, s, t;
    explicit GraphView(const Schema& c)
        : e(c.sort_index("e")), n(c.sort_index("n")), s(c.arrow_index("s")), t(c.arrow_index("t")) {}
};

inline int node_count(const Presheaf& g) { return g.size(g.schema().sort_index("n")); }
inline int edge_count(const Presheaf& g) { return g.size(g.schema().sort_index("e")); }

inline int loop_count(const Presheaf& g) {
    GraphView v(g.schema());
    int k = 0;
    for (int x = 0; x < g.size(v.e); ++x) k += g.act(v.s, x) == g.act(v.t, x);
    return k;
}

} // namespace opensys
