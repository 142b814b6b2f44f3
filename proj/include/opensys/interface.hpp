#pragma once

#include "colimits.hpp"

namespace opensys {

// The adjunction L -| R between finite sets and presheaves on a schema, for
// one interface sort. L(a) is a copies of the representable presheaf at that
// sort; R(x) is the set of interface-sort elements of x (restricted to those
// carrying `label` when it is set). flat = L R.
class Interface {
public:
    Interface(SchemaRef schema, const std::string& sort, std::string label = "")
        : schema_(std::move(schema)), sort_(schema_->sort_index(sort)), label_(std::move(label)) {
        // elements of the representable: the identity and every arrow out of the sort
        reach_.assign(schema_->sort_count(), {});
        reach_[sort_].push_back(kId);
        for (int a : schema_->arrows_from(sort_)) {
            if (schema_->arrows[a].dst == sort_)
                throw Error("BadInterface", "interface sort has a non-identity endomorphism " + schema_->arrows[a].name);
            reach_[schema_->arrows[a].dst].push_back(a);
        }
    }

    const SchemaRef& schema() const { return schema_; }
    int sort() const { return sort_; }
    const std::string& sort_name() const { return schema_->sorts[sort_]; }
    const std::string& label() const { return label_; }

    bool operator==(const Interface& o) const {
        return same_schema(schema_, o.schema_) && sort_ == o.sort_ && label_ == o.label_;
    }

    // Elements of L(n): for sort s, (point, arrow) pairs in point-major order.
    Presheaf L(int n) const {
        const Schema& c = *schema_;
        std::vector<int> sizes(c.sort_count());
        for (int s = 0; s < c.sort_count(); ++s) sizes[s] = n * static_cast<int>(reach_[s].size());
        std::vector<std::vector<int>> act(c.arrow_count());
        for (int a = 0; a < c.arrow_count(); ++a) {
            const int s = c.arrows[a].src, d = c.arrows[a].dst;
            for (int p = 0; p < n; ++p)
                for (int f : reach_[s]) {
                    const int h = c.then(f, a);
                    act[a].push_back(p * static_cast<int>(reach_[d].size()) + position(d, h));
                }
        }
        std::vector<std::vector<std::string>> labels(c.sort_count());
        if (!label_.empty()) labels[sort_].assign(n, label_);
        return Presheaf(schema_, sizes, act, labels);
    }

    // L on a function f: n -> m (f[i] < m)
    Morphism L_map(const std::vector<int>& f, int m) const {
        const int n = static_cast<int>(f.size());
        Presheaf a = L(n), b = L(m);
        Morphism out{a, b, {}};
        for (int s = 0; s < schema_->sort_count(); ++s) {
            const int k = static_cast<int>(reach_[s].size());
            out.comp.emplace_back(n * k);
            for (int p = 0; p < n; ++p)
                for (int j = 0; j < k; ++j) out.comp[s][p * k + j] = f[p] * k + j;
        }
        return out;
    }

    // The map L(n) -> x determined by images of the n generating points.
    Morphism point_map(const std::vector<int>& pts, const Presheaf& x) const {
        require_schema(x);
        const int n = static_cast<int>(pts.size());
        Morphism out{L(n), x, {}};
        for (int s = 0; s < schema_->sort_count(); ++s) {
            out.comp.emplace_back();
            for (int p = 0; p < n; ++p)
                for (int f : reach_[s]) out.comp[s].push_back(x.apply(f, pts[p]));
        }
        auto v = validate_morphism(out);
        if (!v.empty()) throw Error("BadLeg", v.front().detail);
        return out;
    }

    // Images of the generating points under a map out of L(n).
    std::vector<int> points(const Morphism& m) const {
        std::vector<int> out;
        const int n = m.src.size(sort_);
        for (int p = 0; p < n; ++p) out.push_back(m.comp[sort_][p]);
        return out;
    }

    std::vector<int> R(const Presheaf& x) const {
        require_schema(x);
        std::vector<int> out;
        for (int e = 0; e < x.size(sort_); ++e)
            if (label_.empty() || x.label(sort_, e) == label_) out.push_back(e);
        return out;
    }

    int R_size(const Presheaf& x) const { return static_cast<int>(R(x).size()); }

    Morphism counit(const Presheaf& x) const {
        Morphism m = point_map(R(x), x);
        if (!m.is_mono()) throw Error("NotMonic", "counit is not monic for this schema");
        return m;
    }

    Presheaf flat(const Presheaf& x) const { return L(R_size(x)); }

    // L(a + b) -> L(a) + L(b): the structure isomorphism, made explicit
    Morphism sum_iso(int a, int b) const {
        auto co = coproduct(L(a), L(b));
        std::vector<int> pts;
        for (int i = 0; i < a; ++i) pts.push_back(co.inl.comp[sort_][i]);
        for (int i = 0; i < b; ++i) pts.push_back(co.inr.comp[sort_][i]);
        return point_map(pts, co.apex);
    }

    void require_schema(const Presheaf& x) const {
        if (!same_schema(x.schema_ref(), schema_))
            throw Error("SchemaMismatch", "presheaf on " + x.schema().name + ", interface on " + schema_->name);
    }

private:
    int position(int s, int f) const {
        for (std::size_t i = 0; i < reach_[s].size(); ++i)
            if (reach_[s][i] == f) return static_cast<int>(i);
        throw Error("BadInterface", "representable is not closed under composition");
    }

    SchemaRef schema_;
    int sort_;
    std::string label_;
    std::vector<std::vector<int>> reach_;
};

using InterfaceRef = std::shared_ptr<const Interface>;

inline InterfaceRef graph_interface() {
    static const InterfaceRef i = std::make_shared<Interface>(GRAPH(), "n");
    return i;
}

inline InterfaceRef rgraph_interface() {
    static const InterfaceRef i = std::make_shared<Interface>(RGRAPH(), "n");
    return i;
}

inline InterfaceRef set_interface() {
    static const InterfaceRef i = std::make_shared<Interface>(SET(), "x");
    return i;
}

} // namespace opensys
