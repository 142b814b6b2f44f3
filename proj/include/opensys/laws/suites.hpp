#pragma once

// Property suites shared by the unit tests, the CLI checks and the acceptance binary. Each
// suite generates instances, checks them against the brute-force oracles and
// returns a tally.

#include "../dpo.hpp"
#include "../gen.hpp"

#include "oracles.hpp"

#include <sstream>

namespace suite {

using namespace opensys;

struct Tally {
    int instances = 0;
    int failures = 0;
    long checks = 0;
    std::vector<std::string> notes;

    void fail(const std::string& why) {
        ++failures;
        if (notes.size() < 5) notes.push_back(why);
    }
    bool ok() const { return failures == 0; }
    std::string summary() const {
        std::ostringstream o;
        o << instances << " instances, " << checks << " checks, " << failures << " failures";
        for (const auto& n : notes) o << "; " << n;
        return o.str();
    }
};

// Span x <- a -> y with at most 3 elements per sort everywhere.
inline std::pair<Morphism, Morphism> random_span(std::mt19937& rng, bool left_monic = false) {
    for (;;) {
        auto a = oracle::random_presheaf(rng, GRAPH(), 2);
        auto x = oracle::random_presheaf(rng, GRAPH(), 3);
        auto y = oracle::random_presheaf(rng, GRAPH(), 3);
        auto f = oracle::random_hom(rng, a, x, left_monic);
        auto g = oracle::random_hom(rng, a, y);
        if (f && g) return {*f, *g};
    }
}

inline std::pair<Morphism, Morphism> random_cospan(std::mt19937& rng) {
    for (;;) {
        auto a = oracle::random_presheaf(rng, GRAPH(), 3);
        auto x = oracle::random_presheaf(rng, GRAPH(), 3);
        auto y = oracle::random_presheaf(rng, GRAPH(), 3);
        auto f = oracle::random_hom(rng, x, a);
        auto g = oracle::random_hom(rng, y, a);
        if (f && g) return {*f, *g};
    }
}

// Every commuting cocone from the span into a few small targets factors
// uniquely, and factorize returns that mediator.
inline Tally pushout_oracle(std::mt19937& rng, int count) {
    Tally t;
    for (int i = 0; i < count; ++i) {
        auto [f, g] = random_span(rng);
        auto po = pushout(f, g);
        ++t.instances;
        if (!oracle::is_pushout_square(f, g, po.leg_left, po.leg_right)) t.fail("pushout square not pointwise");
        for (int k = 0; k < 2; ++k) {
            auto z = oracle::random_presheaf(rng, GRAPH(), 3);
            auto ps = oracle::brute_homs(f.dst, z), qs = oracle::brute_homs(g.dst, z);
            for (const auto& p : ps)
                for (const auto& q : qs) {
                    const bool commutes = compose(p, f).comp == compose(q, g).comp;
                    if (!commutes) continue;
                    ++t.checks;
                    if (oracle::count_mediators(po.leg_left, po.leg_right, p, q) != 1) {
                        t.fail("pushout cocone without a unique mediator");
                        continue;
                    }
                    auto u = po.factorize(p, q);
                    if (!is_natural(u) || compose(u, po.leg_left).comp != p.comp ||
                        compose(u, po.leg_right).comp != q.comp)
                        t.fail("pushout factorize returned a wrong map");
                }
        }
    }
    return t;
}

inline Tally pullback_oracle(std::mt19937& rng, int count) {
    Tally t;
    for (int i = 0; i < count; ++i) {
        auto [f, g] = random_cospan(rng);
        auto pb = pullback(f, g);
        ++t.instances;
        if (compose(f, pb.proj_left).comp != compose(g, pb.proj_right).comp) t.fail("pullback square does not commute");
        for (int k = 0; k < 2; ++k) {
            auto w = oracle::random_presheaf(rng, GRAPH(), 2);
            auto ps = oracle::brute_homs(w, f.src), qs = oracle::brute_homs(w, g.src);
            for (const auto& p : ps)
                for (const auto& q : qs) {
                    if (compose(f, p).comp != compose(g, q).comp) continue;
                    ++t.checks;
                    if (oracle::count_cone_mediators(pb.proj_left, pb.proj_right, p, q) != 1) {
                        t.fail("pullback cone without a unique mediator");
                        continue;
                    }
                    auto u = pb.factorize(p, q);
                    if (!is_natural(u) || compose(pb.proj_left, u).comp != p.comp ||
                        compose(pb.proj_right, u).comp != q.comp)
                        t.fail("pullback factorize returned a wrong map");
                }
        }
    }
    return t;
}

// Monos are stable under pushout; pushouts along monos are pullbacks.
inline Tally adhesive(std::mt19937& rng, int count) {
    Tally t;
    for (int i = 0; i < count; ++i) {
        auto [f, g] = random_span(rng, true);
        auto po = pushout(f, g);
        ++t.instances;
        if (!po.leg_right.is_mono()) t.fail("pushout of a mono is not mono");
        auto pb = pullback(po.leg_left, po.leg_right);
        auto cmp = pb.factorize(f, g);
        if (!cmp.is_iso()) t.fail("pushout along a mono is not a pullback");
        // independent: cones over the cospan from the span apex factor uniquely
        if (oracle::count_cone_mediators(pb.proj_left, pb.proj_right, f, g) != 1) t.fail("comparison not unique");
    }
    return t;
}

// A cube with monic top and bottom faces, top a pullback, front faces
// pushouts. The bottom face is a pullback iff both back faces are pushouts.
struct Cube {
    Morphism tb_tl, tb_tr, tl_tf, tr_tf;  // top face
    Morphism bb_bl, bb_br, bl_bf, br_bf;  // bottom face
    Morphism v_b, v_l, v_r, v_f;          // verticals
};

inline std::optional<Cube> random_cube(std::mt19937& rng) {
    auto bf = oracle::random_graph(rng, 3, 3);
    auto subs = sub_enumerate(bf);
    auto pick = [&](const std::vector<Subobject>& v) {
        return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
    };
    Subobject bl = pick(subs), br = pick(subs);
    Subobject meet = sub_meet(bl, br);
    std::vector<Subobject> below;
    for (const auto& s : subs) {
        bool inside = true;
        for (std::size_t a = 0; a < s.members.size() && inside; ++a)
            for (std::size_t e = 0; e < s.members[a].size(); ++e)
                if (s.members[a][e] && !meet.members[a][e]) inside = false;
        if (inside) below.push_back(s);
    }
    Subobject bb = std::uniform_int_distribution<int>(0, 1)(rng) ? meet : pick(below);
    auto tf = oracle::random_graph(rng, 3, 3);
    auto h = oracle::random_hom(rng, tf, bf);
    if (!h) return std::nullopt;
    // tl, tr are the preimages of bl, br; tb is their intersection
    auto preimage = [&](const Subobject& s) {
        Subset m = empty_subset(tf);
        for (std::size_t a = 0; a < m.size(); ++a)
            for (std::size_t e = 0; e < m[a].size(); ++e) m[a][e] = s.members[a][h->comp[a][e]];
        return Subobject{tf, m};
    };
    Subobject tl = preimage(bl), tr = preimage(br), tb = sub_meet(tl, tr);
    Subobject tb_img = preimage(bb);
    for (std::size_t a = 0; a < tb.members.size(); ++a)
        for (std::size_t e = 0; e < tb.members[a].size(); ++e)
            if (tb.members[a][e] && !tb_img.members[a][e]) return std::nullopt;
    auto incl = [](const Subobject& small, const Subobject& big) {
        return factor_through_mono(small.inclusion(), big.inclusion());
    };
    Cube c{incl(tb, tl), incl(tb, tr), tl.inclusion(), tr.inclusion(),
           incl(bb, bl), incl(bb, br), bl.inclusion(), br.inclusion(),
           {}, {}, {}, *h};
    auto restrict = [&](const Subobject& top, const Subobject& bottom) {
        return factor_through_mono(compose(*h, top.inclusion()), bottom.inclusion());
    };
    c.v_b = restrict(tb, bb);
    c.v_l = restrict(tl, bl);
    c.v_r = restrict(tr, br);
    // re-source the face maps onto the same objects the verticals use
    c.tb_tl.src = c.tb_tr.src = c.v_b.src;
    c.bb_bl.src = c.bb_br.src = c.v_b.dst;
    const bool front_l = oracle::is_pushout_square(c.v_l, c.tl_tf, c.bl_bf, c.v_f);
    const bool front_r = oracle::is_pushout_square(c.v_r, c.tr_tf, c.br_bf, c.v_f);
    if (!front_l || !front_r) return std::nullopt;
    return c;
}

struct VkTally {
    Tally tally;
    int pullback_cases = 0;
    int non_pullback_cases = 0;
};

inline VkTally vk_dual(std::mt19937& rng, int count) {
    VkTally out;
    while (out.tally.instances < count) {
        auto c = random_cube(rng);
        if (!c) continue;
        ++out.tally.instances;
        // bottom face pullback: bb is exactly the intersection of bl and br in bf
        auto pb = pullback(c->bl_bf, c->br_bf);
        const bool bottom_pb = pb.factorize(c->bb_bl, c->bb_br).is_iso();
        const bool back = oracle::is_pushout_square(c->tb_tl, c->v_b, c->v_l, c->bb_bl) &&
                          oracle::is_pushout_square(c->tb_tr, c->v_b, c->v_r, c->bb_br);
        (bottom_pb ? out.pullback_cases : out.non_pullback_cases)++;
        if (bottom_pb != back) out.tally.fail("bottom pullback and back pushouts disagree");
    }
    return out;
}

// x <- y -> z over x' <- y' -> z' with monic outer verticals and an iso in the
// middle: the induced square of coproducts and pushouts is a pushout with
// monic comparison maps.
inline Tally quotient_monic_pushout(std::mt19937& rng, int count) {
    Tally t;
    while (t.instances < count) {
        auto [yx, yz] = random_span(rng);
        auto x2 = oracle::random_presheaf(rng, GRAPH(), 3);
        auto z2 = oracle::random_presheaf(rng, GRAPH(), 3);
        auto xx = oracle::random_hom(rng, yx.dst, x2, true);
        auto zz = oracle::random_hom(rng, yz.dst, z2, true);
        if (!xx || !zz) continue;
        ++t.instances;
        Morphism y2x = compose(*xx, yx), y2z = compose(*zz, yz);
        auto top = pushout(yx, yz), bot = pushout(y2x, y2z);
        auto s1 = coproduct(yx.dst, yz.dst), s2 = coproduct(x2, z2);
        Morphism rho = s1.copair(top.leg_left, top.leg_right);
        Morphism rho2 = s2.copair(bot.leg_left, bot.leg_right);
        Morphism gamma = s1.copair(compose(s2.inl, *xx), compose(s2.inr, *zz));
        Morphism gamma2 = top.factorize(compose(bot.leg_left, *xx), compose(bot.leg_right, *zz));
        if (!gamma.is_mono()) t.fail("gamma not monic");
        if (!gamma2.is_mono()) t.fail("gamma' not monic");
        if (!oracle::is_pushout_square(rho, gamma, gamma2, rho2)) t.fail("induced square not a pushout");
    }
    return t;
}

// For every host up to the bound, every rule with a monic left leg and every
// match: brute-force subobject search finds exactly one complement when
// apply_rule succeeds and none when it reports a gluing violation.
struct ComplementTally {
    Tally tally;
    int applied = 0;
    int rejected = 0;
};

inline ComplementTally complement_uniqueness(const std::vector<Rule>& rules, int max_nodes, int max_edges) {
    ComplementTally out;
    for (const auto& g : enumerate_graphs(max_nodes, max_edges)) {
        const auto subsets = oracle::brute_subsets(g);
        for (const auto& rule : rules)
            for (const auto& m : oracle::brute_homs(rule.l(), g)) {
                ++out.tally.instances;
                const Morphism km = compose(m, rule.leg_l);
                std::vector<Subset> found;
                for (const auto& sub : subsets) {
                    auto incl = subpresheaf(g, sub);
                    for (const auto& kd : oracle::brute_homs(rule.k(), incl.src)) {
                        if (compose(incl, kd).comp != km.comp) continue;
                        if (oracle::is_pushout_square(rule.leg_l, kd, m, incl)) {
                            found.push_back(sub);
                            break;
                        }
                    }
                }
                std::optional<Step> st;
                try {
                    st = apply_rule(rule, m);
                } catch (const Error& e) {
                    if (e.code() != "GluingViolation") out.tally.fail(rule.name + ": unexpected " + e.code());
                }
                if (st) {
                    ++out.applied;
                    if (found.size() != 1) out.tally.fail(rule.name + ": applied but brute force found " +
                                                          std::to_string(found.size()));
                    else if (image(st->d_to_g) != found.front()) out.tally.fail(rule.name + ": different complement");
                } else {
                    ++out.rejected;
                    if (!found.empty()) out.tally.fail(rule.name + ": rejected but a complement exists");
                }
            }
    }
    return out;
}

} // namespace suite
