#pragma once

#include "square.hpp"

namespace opensys {

// Comonoid maps on a and their right adjoints, all images of set cospans:
//   delta      La -id-> La <-codiag- L(a+a)
//   eps        La -id-> La <-!- L0
//   delta_star L(a+a) -codiag-> La <-id- La
//   eps_star   L0 -!-> La <-id- La
struct RelationStructure {
    Cospan delta, eps, delta_star, eps_star;
};

inline RelationStructure relation_structure(const InterfaceRef& I, int a) {
    return {set_cospan(I, a, iota_vec(a), codiagonal(a)), set_cospan(I, a, iota_vec(a), {}),
            set_cospan(I, a, codiagonal(a), iota_vec(a)), set_cospan(I, a, {}, iota_vec(a))};
}

struct LawReport {
    std::vector<std::pair<std::string, bool>> laws;

    bool ok() const {
        return std::all_of(laws.begin(), laws.end(), [](const auto& l) { return l.second; });
    }
    std::string failed() const {
        std::string out;
        for (const auto& [name, pass] : laws)
            if (!pass) out += (out.empty() ? "" : ", ") + name;
        return out;
    }
};

inline LawReport comonoid_laws(const InterfaceRef& I, int a) {
    auto rs = relation_structure(I, a);
    auto id = identity_cospan(I, a);
    LawReport r;
    r.laws.emplace_back("coassociative", cospan_isomorphic(compose(rs.delta, tensor(rs.delta, id)),
                                                           compose(rs.delta, tensor(id, rs.delta))));
    r.laws.emplace_back("left counit", cospan_isomorphic(compose(rs.delta, tensor(rs.eps, id)), id));
    r.laws.emplace_back("right counit", cospan_isomorphic(compose(rs.delta, tensor(id, rs.eps)), id));
    r.laws.emplace_back("cocommutative", cospan_isomorphic(compose(rs.delta, braiding(I, a, a)), rs.delta));
    return r;
}

inline LawReport frobenius_laws(const InterfaceRef& I, int a) {
    auto rs = relation_structure(I, a);
    auto id = identity_cospan(I, a);
    auto both = set_cospan(I, a, codiagonal(a), codiagonal(a));
    LawReport r;
    r.laws.emplace_back("lhs", cospan_isomorphic(compose(rs.delta_star, rs.delta), both));
    r.laws.emplace_back("rhs", cospan_isomorphic(compose(tensor(id, rs.delta), tensor(rs.delta_star, id)), both));
    r.laws.emplace_back("mirror", cospan_isomorphic(compose(tensor(rs.delta, id), tensor(id, rs.delta_star)), both));
    r.laws.emplace_back("special", cospan_isomorphic(compose(rs.delta, rs.delta_star), id));
    return r;
}

// A globular square top => bot whose middle row is `mid`, with apex maps
// determined by where the generating points of mid's apex go. mid's apex
// must be an L-image.
inline Square globular_square(const Cospan& top, const Cospan& mid, const Cospan& bot, const std::vector<int>& up_pts,
                              const std::vector<int>& down_pts) {
    const Interface& I = *mid.iface;
    return checked(Square{top, mid, bot, iota_vec(mid.left), iota_vec(mid.left), iota_vec(mid.right),
                          iota_vec(mid.right), I.point_map(up_pts, top.apex), I.point_map(down_pts, bot.apex)});
}

// Unit id => f;g and counit g;f => id of an adjunction f -| g between cospans.
struct AdjunctionSquares {
    Cospan f, g;
    Square unit, counit;
};

inline AdjunctionSquares delta_adjunction(const InterfaceRef& I, int a) {
    auto rs = relation_structure(I, a);
    auto fg = compose(rs.delta, rs.delta_star);
    auto gf = compose(rs.delta_star, rs.delta);
    auto ida = identity_cospan(I, a), id2a = identity_cospan(I, 2 * a);
    // unit: the identity row maps into f;g along its left leg
    Square unit = globular_square(ida, ida, fg, iota_vec(a), fg.lleg);
    // counit: L(a+a) lands in g;f along the codiagonal
    Square counit = globular_square(gf, id2a, id2a, gf.lleg, iota_vec(2 * a));
    return {rs.delta, rs.delta_star, unit, counit};
}

inline AdjunctionSquares eps_adjunction(const InterfaceRef& I, int a) {
    auto rs = relation_structure(I, a);
    auto fg = compose(rs.eps, rs.eps_star);
    auto gf = compose(rs.eps_star, rs.eps);
    auto ida = identity_cospan(I, a), id0 = identity_cospan(I, 0);
    // unit: La + La folds onto La above, and is f;g itself below
    Square unit = globular_square(ida, fg, fg, codiagonal(a), iota_vec(2 * a));
    Square counit = globular_square(gf, id0, id0, {}, {});
    return {rs.eps, rs.eps_star, unit, counit};
}

// The two triangle composites, (unit | f) over (f | counit) and
// (g | unit) over (counit | g), compared with the identity squares on f and
// g up to square isomorphism.
inline LawReport triangle_laws(const AdjunctionSquares& adj) {
    auto idf = identity_square(adj.f), idg = identity_square(adj.g);
    auto t1 = v_compose_up_to_iso(h_compose(adj.unit, idf), h_compose(idf, adj.counit));
    auto t2 = v_compose_up_to_iso(h_compose(idg, adj.unit), h_compose(adj.counit, idg));
    LawReport r;
    r.laws.emplace_back("first triangle", square_key(t1) == square_key(idf));
    r.laws.emplace_back("second triangle", square_key(t2) == square_key(idg));
    return r;
}

// The comparison squares making a cospan x: a -> b a lax comonoid
// homomorphism: x;delta_b => delta_a;(x + x) and x;eps_b => eps_a.
inline std::pair<Square, Square> lax_comonoid_squares(const Cospan& x) {
    const InterfaceRef& I = x.iface;
    auto ra = relation_structure(I, x.left), rb = relation_structure(I, x.right);
    auto src1 = compose_with_pushout(x, rb.delta);
    auto tgt1 = compose_with_pushout(ra.delta, tensor(x, x));
    // middle is the target itself; its apex folds onto x through the pushout
    auto xx = coproduct(x.apex, x.apex);
    Morphism fold = xx.copair(src1.po.leg_left, src1.po.leg_left);
    Morphism up1 = tgt1.po.factorize(I->point_map(src1.cospan.lleg, src1.cospan.apex), fold);
    Square s1 = checked(Square{src1.cospan, tgt1.cospan, tgt1.cospan, iota_vec(x.left), iota_vec(x.left),
                               iota_vec(2 * x.right), iota_vec(2 * x.right), up1, identity(tgt1.cospan.apex)});
    auto src2 = compose_with_pushout(x, rb.eps);
    Square s2 = globular_square(src2.cospan, ra.eps, ra.eps, src2.cospan.lleg, iota_vec(x.left));
    return {s1, s2};
}

// Companion of the vertical arrow a <-theta- b -psi-> c: the cospan
// La -L theta^-1-> Lb <-L psi^-1- Lc with its two binding squares.
struct Companion {
    Cospan hat;
    Square upper;  // hat over U_c, left edge f, right edge id
    Square lower;  // U_a over hat, left edge id, right edge f
};

inline Companion companion(const InterfaceRef& I, const std::vector<int>& theta, const std::vector<int>& psi) {
    const int n = static_cast<int>(theta.size());
    if (!is_bijection(theta, n) || !is_bijection(psi, n)) throw Error("NotIso", "vertical legs must be bijections");
    auto hat = set_cospan(I, n, invert(theta), invert(psi));
    Square upper = checked(Square{hat, set_cospan(I, n, iota_vec(n), invert(psi)), identity_cospan(I, n), theta, psi,
                                  iota_vec(n), iota_vec(n), identity(I->L(n)), I->L_map(psi, n)},
                           SquareMode::fine);
    Square lower = checked(Square{identity_cospan(I, n), set_cospan(I, n, invert(theta), iota_vec(n)), hat,
                                  iota_vec(n), iota_vec(n), theta, psi, I->L_map(theta, n), identity(I->L(n))},
                           SquareMode::fine);
    return {hat, upper, lower};
}

inline LawReport companion_laws(const InterfaceRef& I, const std::vector<int>& theta, const std::vector<int>& psi) {
    auto c = companion(I, theta, psi);
    LawReport r;
    r.laws.emplace_back("vertical", square_key(v_compose(c.lower, c.upper)) ==
                                        square_key(vertical_identity_square(I, theta, psi)));
    r.laws.emplace_back("horizontal", square_key(h_compose(c.lower, c.upper)) == square_key(identity_square(c.hat)));
    return r;
}

} // namespace opensys
