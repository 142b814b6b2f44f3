#pragma once

// Random fine and bold squares, and composable quadruples of them, for the
// square calculus tests and the acceptance binary.

#include "../relations.hpp"

#include "suites.hpp"

#include <chrono>

namespace suite {

struct FootLegs {
    std::vector<int> up, down;
};

inline std::vector<int> random_perm(std::mt19937& rng, int n) {
    auto v = iota_vec(n);
    std::shuffle(v.begin(), v.end(), rng);
    return v;
}

inline FootLegs random_legs(std::mt19937& rng, int n) { return {random_perm(rng, n), random_perm(rng, n)}; }

inline bool coin(std::mt19937& rng) { return std::uniform_int_distribution<int>(0, 1)(rng) == 1; }

inline std::vector<std::pair<int, int>> graph_edges(const Presheaf& g) {
    const int s = g.schema().arrow_index("s"), t = g.schema().arrow_index("t");
    std::vector<std::pair<int, int>> out;
    for (int e = 0; e < g.size(0); ++e) out.emplace_back(g.apply(s, e), g.apply(t, e));
    return out;
}

// A random subobject of row.apex containing every leg point.
inline Morphism random_sub_with_legs(std::mt19937& rng, const Cospan& row) {
    Subset sub = empty_subset(row.apex);
    for (int t = 0; t < row.apex.schema().sort_count(); ++t)
        for (int e = 0; e < row.apex.size(t); ++e) sub[t][e] = coin(rng);
    for (int p : row.lleg) sub[1][p] = 1;
    for (int p : row.rleg) sub[1][p] = 1;
    return subpresheaf(row.apex, closure(row.apex, sub));
}

// y plus a few fresh nodes and edges.
inline Morphism random_extension(std::mt19937& rng, const Presheaf& y) {
    const int n = node_count(y) + std::uniform_int_distribution<int>(0, 1)(rng);
    auto edges = graph_edges(y);
    const int extra = n == 0 ? 0 : std::uniform_int_distribution<int>(0, 1)(rng);
    for (int i = 0; i < extra; ++i)
        edges.emplace_back(std::uniform_int_distribution<int>(0, n - 1)(rng),
                           std::uniform_int_distribution<int>(0, n - 1)(rng));
    Presheaf x = make_graph(n, edges);
    return Morphism{y, x, {iota_vec(y.size(0)), iota_vec(y.size(1))}};
}

// Places legs so that other.lleg[perm[i]] = m(mid.lleg[i]).
inline std::vector<int> place(const Morphism& m, const std::vector<int>& mid_pts, const std::vector<int>& perm) {
    std::vector<int> out(mid_pts.size());
    for (std::size_t i = 0; i < mid_pts.size(); ++i) out[perm[i]] = m.comp[1][mid_pts[i]];
    return out;
}

// A square having `row` as its bottom (row_below) or top row. Fine squares
// take the middle apex as a subobject of row and the other row as an
// extension of it. Bold squares add a folded second copy of part of the
// middle apex and may merge two nodes of the other row.
inline Square square_on_row(std::mt19937& rng, const Cospan& row, bool row_below, const FootLegs& left,
                            const FootLegs& right, SquareMode mode) {
    const auto& I = row.iface;
    Morphism sub = random_sub_with_legs(rng, row);
    const Presheaf& s = sub.src;
    std::vector<int> back(row.apex.size(1), -1);
    for (int e = 0; e < s.size(1); ++e) back[sub.comp[1][e]] = e;
    const auto& row_l = row_below ? left.down : left.up;
    const auto& row_r = row_below ? right.down : right.up;
    const auto& oth_l = row_below ? left.up : left.down;
    const auto& oth_r = row_below ? right.up : right.down;
    std::vector<int> lleg(row.left), rleg(row.right);
    for (int i = 0; i < row.left; ++i) lleg[i] = back[row.lleg[row_l[i]]];
    for (int i = 0; i < row.right; ++i) rleg[i] = back[row.rleg[row_r[i]]];

    Morphism to_row = sub, ext = random_extension(rng, s);
    Presheaf y = s;
    if (mode == SquareMode::bold) {
        // fold a random subobject of s onto itself
        auto subs = sub_enumerate(s);
        Morphism extra = pick(rng, subs).inclusion();
        auto co = coproduct(s, extra.src);
        y = co.apex;
        // merge two nodes of the extension
        Morphism q = identity(ext.dst);
        if (node_count(ext.dst) >= 2 && coin(rng)) {
            const int u = std::uniform_int_distribution<int>(0, node_count(ext.dst) - 1)(rng);
            const int v = std::uniform_int_distribution<int>(0, node_count(ext.dst) - 1)(rng);
            q = pushout(I->point_map({u, v}, ext.dst), I->L_map({0, 0}, 1)).leg_left;
        }
        Morphism e2 = compose(q, ext);
        to_row = co.copair(sub, compose(sub, extra));
        ext = co.copair(e2, compose(e2, extra));
        lleg = map_points(co.inl, 1, lleg);
        rleg = map_points(co.inl, 1, rleg);
    }
    Cospan mid{I, row.left, row.right, y, lleg, rleg};
    Cospan other{I, row.left, row.right, ext.dst, place(ext, lleg, oth_l), place(ext, rleg, oth_r)};
    Square out = row_below ? Square{other, mid, row, left.up, left.down, right.up, right.down, ext, to_row}
                           : Square{row, mid, other, left.up, left.down, right.up, right.down, to_row, ext};
    return checked(out, mode);
}

struct Quadruple {
    Square alpha, beta, alpha2, beta2;
};

// alpha | beta over alpha' | beta', sharing the middle rows exactly.
inline Quadruple random_quadruple(std::mt19937& rng, SquareMode mode, int max_nodes = 3) {
    auto feet = [&] { return std::uniform_int_distribution<int>(0, 2)(rng); };
    const int a = feet(), b = feet(), c = feet();
    const auto& I = graph_interface();
    Cospan ra = random_open_graph(rng, I, a, b, max_nodes, max_nodes);
    Cospan rb = random_open_graph(rng, I, b, c, max_nodes, max_nodes);
    auto pl = random_legs(rng, a), pm = random_legs(rng, b), pr = random_legs(rng, c);
    auto ql = random_legs(rng, a), qm = random_legs(rng, b), qr = random_legs(rng, c);
    return {square_on_row(rng, ra, true, pl, pm, mode), square_on_row(rng, rb, true, pm, pr, mode),
            square_on_row(rng, ra, false, ql, qm, mode), square_on_row(rng, rb, false, qm, qr, mode)};
}

inline Square random_square(std::mt19937& rng, SquareMode mode, int left, int right, int max_nodes = 3) {
    Cospan row = random_open_graph(rng, graph_interface(), left, right, max_nodes, max_nodes);
    return square_on_row(rng, row, coin(rng), random_legs(rng, left), random_legs(rng, right), mode);
}

struct InterchangeTally {
    Tally tally;
    double seconds = 0;
    int nontrivial = 0;  // rows_first and columns_first not literally equal
};

inline InterchangeTally interchange_suite(std::mt19937& rng, int count, SquareMode mode) {
    InterchangeTally out;
    const auto start = std::chrono::steady_clock::now();
    for (int k = 0; k < count; ++k) {
        auto q = random_quadruple(rng, mode);
        ++out.tally.instances;
        auto r = interchange_check(q.alpha, q.beta, q.alpha2, q.beta2, mode);
        ++out.tally.checks;
        if (!(r.rows_first.mid == r.columns_first.mid)) ++out.nontrivial;
        if (!r.ok) {
            out.tally.fail("interchange failed at instance " + std::to_string(k));
            continue;
        }
        // the witness must really commute with everything
        ++out.tally.checks;
        const bool forward = mode == SquareMode::fine || r.direction == "rows->columns";
        const Square& src = forward ? r.rows_first : r.columns_first;
        const Square& dst = forward ? r.columns_first : r.rows_first;
        const bool iso_ok = mode == SquareMode::bold || r.witness->is_iso();
        if (!iso_ok || !is_natural(*r.witness) || compose(dst.up, *r.witness) != src.up ||
            compose(dst.down, *r.witness) != src.down)
            out.tally.fail("witness does not commute at instance " + std::to_string(k));
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

} // namespace suite
