#pragma once

#include "diagram.hpp"
#include "interface.hpp"

namespace opensys {

// A structured cospan L(left) -> apex <- L(right). Legs are stored as the
// images of the generating points, i.e. elements of the interface sort.
struct Cospan {
    InterfaceRef iface;
    int left = 0;
    int right = 0;
    Presheaf apex;
    std::vector<int> lleg;
    std::vector<int> rleg;

    Morphism left_leg() const { return iface->point_map(lleg, apex); }
    Morphism right_leg() const { return iface->point_map(rleg, apex); }
    bool closed() const { return left == 0 && right == 0; }

    bool operator==(const Cospan& o) const {
        return *iface == *o.iface && left == o.left && right == o.right && apex == o.apex && lleg == o.lleg &&
               rleg == o.rleg;
    }
    bool operator!=(const Cospan& o) const { return !(*this == o); }
};

inline std::vector<Violation> validate_cospan(const Cospan& c) {
    std::vector<Violation> out;
    if (!c.iface) return {{"NoInterface", "cospan without interface"}};
    if (!same_schema(c.apex.schema_ref(), c.iface->schema()))
        return {{"SchemaMismatch", "apex is not on the interface schema"}};
    for (auto& v : validate_presheaf(c.apex)) out.push_back(v);
    if (!out.empty()) return out;
    auto leg = [&](const std::vector<int>& pts, int n, const char* name) {
        if (static_cast<int>(pts.size()) != n) {
            out.push_back({"BadLeg", std::string(name) + " leg has the wrong number of points"});
            return;
        }
        for (int p : pts)
            if (p < 0 || p >= c.apex.size(c.iface->sort())) {
                out.push_back({"BadLeg", std::string(name) + " leg point out of range"});
                return;
            }
        Morphism m{c.iface->L(n), c.apex, {}};
        try {
            m = c.iface->point_map(pts, c.apex);
        } catch (const Error& e) {
            out.push_back({"BadLeg", std::string(name) + ": " + e.detail()});
        }
    };
    leg(c.lleg, c.left, "left");
    leg(c.rleg, c.right, "right");
    return out;
}

inline Cospan checked(Cospan c) {
    auto v = validate_cospan(c);
    if (!v.empty()) throw Error(v.front().code, v.front().detail);
    return c;
}

inline void require_same_interface(const Cospan& a, const Cospan& b) {
    if (!(*a.iface == *b.iface)) throw Error("InterfaceMismatch", "cospans use different interfaces");
}

inline std::vector<int> map_points(const Morphism& m, int sort, const std::vector<int>& pts) {
    std::vector<int> out;
    for (int p : pts) out.push_back(m.comp[sort][p]);
    return out;
}

// Composite by pushout over the shared foot.
struct Composite {
    Cospan cospan;
    PushoutResult po;
};

inline Composite compose_with_pushout(const Cospan& c1, const Cospan& c2) {
    require_same_interface(c1, c2);
    if (c1.right != c2.left)
        throw Error("FeetMismatch", std::to_string(c1.right) + " vs " + std::to_string(c2.left));
    auto po = pushout(c1.right_leg(), c2.left_leg());
    const int n = c1.iface->sort();
    Cospan out{c1.iface, c1.left, c2.right, po.apex, map_points(po.leg_left, n, c1.lleg),
               map_points(po.leg_right, n, c2.rleg)};
    return {out, po};
}

inline Cospan compose(const Cospan& c1, const Cospan& c2) { return compose_with_pushout(c1, c2).cospan; }

inline Cospan compose_all(const std::vector<Cospan>& cs) {
    Cospan out = cs.front();
    for (std::size_t i = 1; i < cs.size(); ++i) out = compose(out, cs[i]);
    return out;
}

// Tensor: coproduct of feet and apexes. The legs are built as
// L(a + a') ~ La + La' -> x + x', with the structure iso made explicit.
inline Cospan tensor(const Cospan& c1, const Cospan& c2) {
    require_same_interface(c1, c2);
    const Interface& I = *c1.iface;
    auto co = coproduct(c1.apex, c2.apex);
    auto leg = [&](int a, int b, const Morphism& l1, const Morphism& l2) {
        auto feet = coproduct(l1.src, l2.src);
        Morphism sum = feet.copair(compose(co.inl, l1), compose(co.inr, l2));
        Morphism iso = I.sum_iso(a, b);
        return I.points(compose(sum, iso));
    };
    return Cospan{c1.iface, c1.left + c2.left, c1.right + c2.right, co.apex,
                  leg(c1.left, c2.left, c1.left_leg(), c2.left_leg()),
                  leg(c1.right, c2.right, c1.right_leg(), c2.right_leg())};
}

inline Cospan tensor_all(const std::vector<Cospan>& cs) {
    Cospan out = cs.front();
    for (std::size_t i = 1; i < cs.size(); ++i) out = tensor(out, cs[i]);
    return out;
}

// L applied to a cospan of finite sets a -f-> n <-g- b.
inline Cospan set_cospan(const InterfaceRef& I, int n, const std::vector<int>& f, const std::vector<int>& g) {
    // the generating points of L(n) are elements 0..n-1 of the interface sort
    return checked(Cospan{I, static_cast<int>(f.size()), static_cast<int>(g.size()), I->L(n), f, g});
}

inline std::vector<int> iota_vec(int n, int start = 0) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), start);
    return v;
}

inline Cospan identity_cospan(const InterfaceRef& I, int a) { return set_cospan(I, a, iota_vec(a), iota_vec(a)); }

inline Cospan empty_cospan(const InterfaceRef& I) { return identity_cospan(I, 0); }

// codiagonal a + a -> a
inline std::vector<int> codiagonal(int a) {
    auto v = iota_vec(a);
    v.insert(v.end(), v.begin(), v.end());
    return v;
}

// L(a + a) --L codiag--> La <-- L0
inline Cospan evaluation(const InterfaceRef& I, int a) { return set_cospan(I, a, codiagonal(a), {}); }

// L0 --> La <--L codiag-- L(a + a)
inline Cospan coevaluation(const InterfaceRef& I, int a) { return set_cospan(I, a, {}, codiagonal(a)); }

// L(a + b) -> L(a + b) <- L(b + a), swapping the blocks
inline Cospan braiding(const InterfaceRef& I, int a, int b) {
    std::vector<int> g;
    for (int i = 0; i < b; ++i) g.push_back(a + i);
    for (int i = 0; i < a; ++i) g.push_back(i);
    return set_cospan(I, a + b, iota_vec(a + b), g);
}

// ---- morphisms and isomorphism of cospans ----

struct CospanMorphism {
    std::vector<int> f;  // left foot map
    Morphism g;          // apex map
    std::vector<int> h;  // right foot map
};

inline bool cospan_morphism_check(const Cospan& c1, const Cospan& c2, const CospanMorphism& m) {
    if (!(m.g.src == c1.apex) || !(m.g.dst == c2.apex) || !is_natural(m.g)) return false;
    if (static_cast<int>(m.f.size()) != c1.left || static_cast<int>(m.h.size()) != c1.right) return false;
    const int n = c1.iface->sort();
    for (int i = 0; i < c1.left; ++i)
        if (m.f[i] < 0 || m.f[i] >= c2.left || m.g.comp[n][c1.lleg[i]] != c2.lleg[m.f[i]]) return false;
    for (int i = 0; i < c1.right; ++i)
        if (m.h[i] < 0 || m.h[i] >= c2.right || m.g.comp[n][c1.rleg[i]] != c2.rleg[m.h[i]]) return false;
    return true;
}

inline Presheaf pack_cospan(const Cospan& c) {
    const int n = c.iface->sort();
    Presheaf lf = pin_points(c.iface->L(c.left), n);
    Presheaf rf = pin_points(c.iface->L(c.right), n);
    Morphism l = c.left_leg(), r = c.right_leg();
    l.src = lf;
    r.src = rf;
    return pack(Diagram{&cospan_shape(), {lf, c.apex, rf}, {l, r}});
}

// Isomorphism class of the cospan with feet held fixed pointwise.
inline std::string cospan_key(const Cospan& c) { return canonical_key(pack_cospan(c)); }

// Searches an invertible cospan morphism with identity foot maps.
inline std::optional<CospanMorphism> cospan_iso_search(const Cospan& c1, const Cospan& c2) {
    require_same_interface(c1, c2);
    if (c1.left != c2.left || c1.right != c2.right || c1.apex.sizes() != c2.apex.sizes()) return std::nullopt;
    auto iso = iso_search(pack_cospan(c1), pack_cospan(c2));
    if (!iso) return std::nullopt;
    const int ns = c1.apex.schema().sort_count();
    CospanMorphism m{iota_vec(c1.left), Morphism{c1.apex, c2.apex, component_at(*iso, 1, ns)}, iota_vec(c1.right)};
    return m;
}

inline bool cospan_isomorphic(const Cospan& c1, const Cospan& c2) { return cospan_iso_search(c1, c2).has_value(); }

} // namespace opensys
