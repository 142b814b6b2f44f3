#pragma once

#include "dpo.hpp"

namespace opensys {

// A span of structured cospans drawn as a 3x3 grid:
//
//   L(top.left) --> x <-- L(top.right)
//        ^ lup      ^ up        ^ rup
//   L(mid.left) --> y <-- L(mid.right)
//        v ldown    v down      v rdown
//   L(bot.left) --> z <-- L(bot.right)
//
// Outer vertical legs are bijections of feet, stored as functions from the
// middle foot. Fine squares have monic up and down.
struct Square {
    Cospan top, mid, bot;
    std::vector<int> lup, ldown, rup, rdown;
    Morphism up, down;

    bool operator==(const Square& o) const {
        return top == o.top && mid == o.mid && bot == o.bot && lup == o.lup && ldown == o.ldown && rup == o.rup &&
               rdown == o.rdown && up == o.up && down == o.down;
    }
};

enum class SquareMode { fine, bold };

inline bool is_bijection(const std::vector<int>& f, int n) {
    if (static_cast<int>(f.size()) != n) return false;
    std::vector<char> hit(n, 0);
    for (int v : f) {
        if (v < 0 || v >= n || hit[v]) return false;
        hit[v] = 1;
    }
    return true;
}

inline std::vector<int> invert(const std::vector<int>& f) {
    std::vector<int> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[f[i]] = static_cast<int>(i);
    return out;
}

inline std::vector<int> then(const std::vector<int>& f, const std::vector<int>& g) {
    std::vector<int> out;
    for (int v : f) out.push_back(g[v]);
    return out;
}

inline std::vector<Violation> validate_square(const Square& s, SquareMode mode) {
    std::vector<Violation> out;
    for (const Cospan* c : {&s.top, &s.mid, &s.bot})
        for (auto& v : validate_cospan(*c)) out.push_back(v);
    if (!out.empty()) return out;
    if (!(*s.top.iface == *s.mid.iface) || !(*s.mid.iface == *s.bot.iface))
        return {{"InterfaceMismatch", "rows use different interfaces"}};
    auto leg = [&](const std::vector<int>& f, int n, int m, const char* name) {
        if (n != m || !is_bijection(f, n)) out.push_back({"NotIso", std::string(name) + " foot leg is not a bijection"});
    };
    leg(s.lup, s.mid.left, s.top.left, "left upper");
    leg(s.ldown, s.mid.left, s.bot.left, "left lower");
    leg(s.rup, s.mid.right, s.top.right, "right upper");
    leg(s.rdown, s.mid.right, s.bot.right, "right lower");
    if (!out.empty()) return out;
    auto apex_map = [&](const Morphism& m, const Presheaf& src, const Presheaf& dst, const char* name) {
        if (!(m.src == src) || !(m.dst == dst)) {
            out.push_back({"BadMorphism", std::string(name) + " has the wrong ends"});
            return false;
        }
        if (!is_natural(m)) {
            out.push_back({"BadMorphism", std::string(name) + " is not natural"});
            return false;
        }
        return true;
    };
    if (!apex_map(s.up, s.mid.apex, s.top.apex, "up") || !apex_map(s.down, s.mid.apex, s.bot.apex, "down")) return out;
    const int n = s.mid.iface->sort();
    auto face = [&](const Morphism& m, const std::vector<int>& pts, const std::vector<int>& foot,
                    const std::vector<int>& target, const char* name) {
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (m.comp[n][pts[i]] != target[foot[i]]) {
                out.push_back({"FaceNotCommuting", name});
                return;
            }
    };
    face(s.up, s.mid.lleg, s.lup, s.top.lleg, "top-left");
    face(s.up, s.mid.rleg, s.rup, s.top.rleg, "top-right");
    face(s.down, s.mid.lleg, s.ldown, s.bot.lleg, "bottom-left");
    face(s.down, s.mid.rleg, s.rdown, s.bot.rleg, "bottom-right");
    if (mode == SquareMode::fine) {
        if (!s.up.is_mono()) out.push_back({"NotMonic", "up is not monic"});
        if (!s.down.is_mono()) out.push_back({"NotMonic", "down is not monic"});
    }
    return out;
}

inline bool is_square(const Square& s, SquareMode mode) { return validate_square(s, mode).empty(); }

inline Square checked(Square s, SquareMode mode = SquareMode::bold) {
    auto v = validate_square(s, mode);
    if (!v.empty()) throw Error(v.front().code, v.front().detail);
    return s;
}

inline Square identity_square(const Cospan& c) {
    return Square{c, c, c, iota_vec(c.left), iota_vec(c.left), iota_vec(c.right), iota_vec(c.right),
                  identity(c.apex), identity(c.apex)};
}

// The identity on a vertical arrow a <-theta- b -psi-> c: rows are the
// identity cospans, apex maps are L(theta) and L(psi).
inline Square vertical_identity_square(const InterfaceRef& I, const std::vector<int>& theta,
                                       const std::vector<int>& psi) {
    const int n = static_cast<int>(theta.size());
    return checked(Square{identity_cospan(I, n), identity_cospan(I, n), identity_cospan(I, n), theta, psi, theta, psi,
                          I->L_map(theta, n), I->L_map(psi, n)},
                   SquareMode::fine);
}

// The square of a rewrite of an open system: before <- d -> after.
inline Square square_from_open_step(const OpenStep& st) {
    const Cospan& x = st.before;
    const int n = x.iface->sort();
    const Morphism& dg = st.step.d_to_g;
    std::vector<int> back(x.apex.size(n), -1);
    for (int e = 0; e < dg.src.size(n); ++e) back[dg.comp[n][e]] = e;
    Cospan mid{x.iface, x.left, x.right, dg.src, then(x.lleg, back), then(x.rleg, back)};
    return checked(Square{x, checked(std::move(mid)), st.after, iota_vec(x.left), iota_vec(x.left), iota_vec(x.right),
                          iota_vec(x.right), dg, st.step.d_to_h});
}

inline void require_mode(const Square& s, SquareMode mode, const char* where) {
    auto v = validate_square(s, mode);
    if (!v.empty()) throw Error(v.front().code, std::string(where) + ": " + v.front().detail);
}

// ---- composition ----

inline Square h_compose(const Square& s1, const Square& s2, SquareMode mode = SquareMode::bold) {
    require_mode(s1, mode, "h_compose");
    require_mode(s2, mode, "h_compose");
    if (s1.top.right != s2.top.left || s1.mid.right != s2.mid.left || s1.bot.right != s2.bot.left ||
        s1.rup != s2.lup || s1.rdown != s2.ldown)
        throw Error("BoundaryMismatch", "right boundary of the first square differs from the left of the second");
    auto t = compose_with_pushout(s1.top, s2.top);
    auto m = compose_with_pushout(s1.mid, s2.mid);
    auto b = compose_with_pushout(s1.bot, s2.bot);
    Morphism up = m.po.factorize(compose(t.po.leg_left, s1.up), compose(t.po.leg_right, s2.up));
    Morphism down = m.po.factorize(compose(b.po.leg_left, s1.down), compose(b.po.leg_right, s2.down));
    Square out{t.cospan, m.cospan, b.cospan, s1.lup, s1.ldown, s2.rup, s2.rdown, std::move(up), std::move(down)};
    require_mode(out, mode, "h_compose result");
    return out;
}

inline Square v_compose(const Square& s1, const Square& s2, SquareMode mode = SquareMode::bold) {
    require_mode(s1, mode, "v_compose");
    require_mode(s2, mode, "v_compose");
    if (s1.bot != s2.top) throw Error("BoundaryMismatch", "bottom row of the first square is not the top of the second");
    auto pb = pullback(s1.down, s2.up);
    const int n = s1.mid.iface->sort();
    std::map<std::pair<int, int>, int> at;
    for (int e = 0; e < pb.apex.size(n); ++e) at[{pb.proj_left.comp[n][e], pb.proj_right.comp[n][e]}] = e;
    // middle feet: pairs agreeing in the shared row, ordered by the first component
    auto feet = [&](const std::vector<int>& down1, const std::vector<int>& up2, const std::vector<int>& leg1,
                    const std::vector<int>& leg2, std::vector<int>& leg, std::vector<int>& from1,
                    std::vector<int>& from2) {
        const auto inv = invert(up2);
        for (std::size_t i = 0; i < down1.size(); ++i) {
            const int j = inv[down1[i]];
            leg.push_back(at.at({leg1[i], leg2[j]}));
            from1.push_back(static_cast<int>(i));
            from2.push_back(j);
        }
    };
    std::vector<int> lleg, rleg, li, lj, ri, rj;
    feet(s1.ldown, s2.lup, s1.mid.lleg, s2.mid.lleg, lleg, li, lj);
    feet(s1.rdown, s2.rup, s1.mid.rleg, s2.mid.rleg, rleg, ri, rj);
    Cospan mid{s1.mid.iface, s1.mid.left, s1.mid.right, pb.apex, lleg, rleg};
    Square out{s1.top, checked(std::move(mid)), s2.bot, then(li, s1.lup), then(lj, s2.ldown), then(ri, s1.rup),
               then(rj, s2.rdown), compose(s1.up, pb.proj_left), compose(s2.down, pb.proj_right)};
    require_mode(out, mode, "v_compose result");
    return out;
}

// Replace the top row by an isomorphic cospan with the same feet.
inline Square rebase_top(const Square& s, const Cospan& c) {
    auto iso = cospan_iso_search(c, s.top);
    if (!iso) throw Error("BoundaryMismatch", "rebase: rows are not isomorphic");
    Square out = s;
    out.top = c;
    out.up = compose(inverse(iso->g), s.up);
    return out;
}

inline Square rebase_bottom(const Square& s, const Cospan& c) {
    auto iso = cospan_iso_search(c, s.bot);
    if (!iso) throw Error("BoundaryMismatch", "rebase: rows are not isomorphic");
    Square out = s;
    out.bot = c;
    out.down = compose(inverse(iso->g), s.down);
    return out;
}

// Vertical composite when the shared rows agree only up to isomorphism.
inline Square v_compose_up_to_iso(const Square& s1, const Square& s2, SquareMode mode = SquareMode::bold) {
    return v_compose(s1, s1.bot == s2.top ? s2 : rebase_top(s2, s1.bot), mode);
}

inline Square tensor_square(const Square& s1, const Square& s2) {
    auto shift = [](std::vector<int> a, const std::vector<int>& b, int by) {
        for (int v : b) a.push_back(v + by);
        return a;
    };
    auto top = tensor(s1.top, s2.top), mid = tensor(s1.mid, s2.mid), bot = tensor(s1.bot, s2.bot);
    auto ct = coproduct(s1.top.apex, s2.top.apex), cm = coproduct(s1.mid.apex, s2.mid.apex),
         cb = coproduct(s1.bot.apex, s2.bot.apex);
    return Square{top,
                  mid,
                  bot,
                  shift(s1.lup, s2.lup, s1.top.left),
                  shift(s1.ldown, s2.ldown, s1.bot.left),
                  shift(s1.rup, s2.rup, s1.top.right),
                  shift(s1.rdown, s2.rdown, s1.bot.right),
                  cm.copair(compose(ct.inl, s1.up), compose(ct.inr, s2.up)),
                  cm.copair(compose(cb.inl, s1.down), compose(cb.inr, s2.down))};
}

// ---- isomorphism and bold equivalence ----

inline Presheaf pack_square(const Square& s, bool rows_fixed) {
    const Interface& I = *s.mid.iface;
    const int n = I.sort();
    auto foot = [&](int k) { return pin_points(I.L(k), n); };
    auto fixed = [&](const Presheaf& x) {
        if (!rows_fixed) return x;
        auto labels = x.labels();
        labels.resize(x.schema().sort_count());
        for (int t = 0; t < x.schema().sort_count(); ++t) {
            labels[t].resize(x.size(t));
            for (int e = 0; e < x.size(t); ++e) labels[t][e] = x.label(t, e) + "@" + std::to_string(e);
        }
        return relabel(x, labels);
    };
    auto leg = [](Morphism m, const Presheaf& src) {
        m.src = src;
        return m;
    };
    Presheaf tl = foot(s.top.left), tr = foot(s.top.right), bl = foot(s.bot.left), br = foot(s.bot.right);
    Presheaf ml = I.L(s.mid.left), mr = I.L(s.mid.right);
    std::vector<Presheaf> objects{tl, fixed(s.top.apex), tr, ml, s.mid.apex, mr, bl, fixed(s.bot.apex), br};
    std::vector<Morphism> arrows{leg(s.top.left_leg(), tl),
                                 leg(s.top.right_leg(), tr),
                                 s.mid.left_leg(),
                                 s.mid.right_leg(),
                                 leg(s.bot.left_leg(), bl),
                                 leg(s.bot.right_leg(), br),
                                 I.L_map(s.lup, s.top.left),
                                 I.L_map(s.ldown, s.bot.left),
                                 I.L_map(s.rup, s.top.right),
                                 I.L_map(s.rdown, s.bot.right),
                                 s.up,
                                 s.down};
    return pack(Diagram{&square_shape(), objects, arrows});
}

// Isomorphism class of the square with the four corner feet held fixed.
inline std::string square_key(const Square& s) { return canonical_key(pack_square(s, false)); }

// Searches an isomorphism of middle apexes commuting with every face. With
// rows_fixed the top and bottom rows must coincide and are held pointwise.
inline std::optional<Morphism> square_iso_search(const Square& s1, const Square& s2, bool rows_fixed = true) {
    if (rows_fixed && (s1.top != s2.top || s1.bot != s2.bot)) return std::nullopt;
    if (s1.mid.apex.sizes() != s2.mid.apex.sizes() || s1.mid.left != s2.mid.left || s1.mid.right != s2.mid.right)
        return std::nullopt;
    auto iso = iso_search(pack_square(s1, rows_fixed), pack_square(s2, rows_fixed));
    if (!iso) return std::nullopt;
    const int ns = s1.mid.apex.schema().sort_count();
    return Morphism{s1.mid.apex, s2.mid.apex, component_at(*iso, 4, ns)};
}

inline bool same_boundary(const Square& s1, const Square& s2) {
    return s1.top == s2.top && s1.bot == s2.bot && s1.lup == s2.lup && s1.ldown == s2.ldown && s1.rup == s2.rup &&
           s1.rdown == s2.rdown;
}

// A morphism theta: y1 -> y2 of middle apexes commuting with up, down and
// the middle legs. Requires the same boundary.
inline std::optional<Morphism> connecting_morphism(const Square& s1, const Square& s2) {
    if (!same_boundary(s1, s2)) return std::nullopt;
    const int n = s1.mid.iface->sort();
    auto decorate = [](const Square& s) {
        const Presheaf& y = s.mid.apex;
        auto labels = y.labels();
        labels.resize(y.schema().sort_count());
        for (int t = 0; t < y.schema().sort_count(); ++t) {
            labels[t].resize(y.size(t));
            for (int e = 0; e < y.size(t); ++e)
                labels[t][e] = y.label(t, e) + "|" + std::to_string(s.up.comp[t][e]) + "," +
                               std::to_string(s.down.comp[t][e]);
        }
        return relabel(y, labels);
    };
    HomOptions opt;
    opt.fixed.assign(s1.mid.apex.schema().sort_count(), {});
    opt.fixed[n].assign(s1.mid.apex.size(n), -1);
    auto pin = [&](const std::vector<int>& from, const std::vector<int>& to) {
        for (std::size_t i = 0; i < from.size(); ++i) {
            int& slot = opt.fixed[n][from[i]];
            if (slot >= 0 && slot != to[i]) return false;
            slot = to[i];
        }
        return true;
    };
    // the middle foot map is forced by the outer legs, which are equal
    if (!pin(s1.mid.lleg, s2.mid.lleg) || !pin(s1.mid.rleg, s2.mid.rleg)) return std::nullopt;
    auto h = find_hom(decorate(s1), decorate(s2), opt);
    if (!h) return std::nullopt;
    return Morphism{s1.mid.apex, s2.mid.apex, h->comp};
}

// The span y1 <- w -> y2 where w holds the pairs agreeing under up and down.
// It connects any two squares with the same boundary.
inline std::optional<std::pair<Morphism, Morphism>> connecting_span(const Square& s1, const Square& s2) {
    if (!same_boundary(s1, s2)) return std::nullopt;
    auto pb = pullback(s1.up, s2.up);
    Subset agree = empty_subset(pb.apex);
    for (int t = 0; t < pb.apex.schema().sort_count(); ++t)
        for (int e = 0; e < pb.apex.size(t); ++e)
            agree[t][e] = s1.down.comp[t][pb.proj_left.comp[t][e]] == s2.down.comp[t][pb.proj_right.comp[t][e]];
    Morphism incl = subpresheaf(pb.apex, agree);
    Morphism p1 = compose(pb.proj_left, incl), p2 = compose(pb.proj_right, incl);
    // the middle legs must lift
    const int n = s1.mid.iface->sort();
    auto lifts = [&](const std::vector<int>& a, const std::vector<int>& b) {
        for (std::size_t i = 0; i < a.size(); ++i) {
            bool found = false;
            for (int e = 0; e < incl.src.size(n) && !found; ++e)
                found = p1.comp[n][e] == a[i] && p2.comp[n][e] == b[i];
            if (!found) return false;
        }
        return true;
    };
    if (!lifts(s1.mid.lleg, s2.mid.lleg) || !lifts(s1.mid.rleg, s2.mid.rleg)) return std::nullopt;
    return std::make_pair(p1, p2);
}

// Bounded zig-zag search in the category of squares over a fixed boundary.
// Budget 0 is equality, 1 a single morphism either way, 2 or more also
// accepts the agreement span.
inline bool bold_equivalent(const Square& s1, const Square& s2, int budget = 2) {
    if (!same_boundary(s1, s2)) return false;
    if (s1 == s2) return true;
    if (budget < 1) return false;
    if (connecting_morphism(s1, s2) || connecting_morphism(s2, s1)) return true;
    if (budget < 2) return false;
    return connecting_span(s1, s2).has_value();
}

// ---- interchange ----

struct InterchangeResult {
    bool ok = false;
    Square rows_first;     // (alpha | beta) over (alpha' | beta')
    Square columns_first;  // (alpha over alpha') | (beta over beta')
    std::optional<Morphism> witness;
    std::string direction;  // for bold: "rows->columns" or "columns->rows"
};

inline InterchangeResult interchange_check(const Square& alpha, const Square& beta, const Square& alpha2,
                                           const Square& beta2, SquareMode mode) {
    InterchangeResult r;
    r.rows_first = v_compose(h_compose(alpha, beta, mode), h_compose(alpha2, beta2, mode), mode);
    r.columns_first = h_compose(v_compose(alpha, alpha2, mode), v_compose(beta, beta2, mode), mode);
    if (mode == SquareMode::fine) {
        r.witness = square_iso_search(r.rows_first, r.columns_first, true);
        r.direction = "iso";
    } else {
        r.witness = connecting_morphism(r.columns_first, r.rows_first);
        r.direction = "columns->rows";
        if (!r.witness) {
            r.witness = connecting_morphism(r.rows_first, r.columns_first);
            r.direction = "rows->columns";
        }
    }
    r.ok = r.witness.has_value();
    return r;
}

} // namespace opensys
