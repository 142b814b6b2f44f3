#pragma once

#include "cospan.hpp"

#include <functional>
#include <random>

namespace opensys {

// One representative per isomorphism class of plain graphs with at most
// max_nodes nodes and max_edges edges, ordered by (nodes, edges, key).
inline std::vector<Presheaf> enumerate_graphs(int max_nodes, int max_edges) {
    std::vector<Presheaf> out;
    for (int n = 0; n <= max_nodes; ++n) {
        std::vector<std::pair<int, int>> pairs;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) pairs.emplace_back(a, b);
        for (int m = 0; m <= max_edges && (n > 0 || m == 0); ++m) {
            std::map<std::string, Presheaf> reps;
            std::vector<std::pair<int, int>> edges;
            // multisets of m edges, as non-decreasing index sequences
            std::function<void(std::size_t)> rec = [&](std::size_t from) {
                if (static_cast<int>(edges.size()) == m) {
                    auto g = make_graph(n, edges);
                    reps.try_emplace(canonical_key(g), g);
                    return;
                }
                for (std::size_t i = from; i < pairs.size(); ++i) {
                    edges.push_back(pairs[i]);
                    rec(i);
                    edges.pop_back();
                }
            };
            rec(0);
            for (auto& [k, g] : reps) out.push_back(g);
        }
    }
    return out;
}

inline Presheaf random_graph(std::mt19937& rng, int max_nodes, int max_edges, int min_nodes = 0) {
    const int n = std::uniform_int_distribution<int>(min_nodes, max_nodes)(rng);
    const int m = n == 0 ? 0 : std::uniform_int_distribution<int>(0, max_edges)(rng);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < m; ++i)
        edges.emplace_back(std::uniform_int_distribution<int>(0, n - 1)(rng),
                           std::uniform_int_distribution<int>(0, n - 1)(rng));
    return make_graph(n, edges);
}

template <class T>
const T& pick(std::mt19937& rng, const std::vector<T>& v) {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

// A random open graph with the given feet over a graph-like interface.
inline Cospan random_open_graph(std::mt19937& rng, const InterfaceRef& I, int left, int right, int max_nodes,
                                int max_edges) {
    Presheaf g = random_graph(rng, std::max(max_nodes, 1), max_edges, left + right > 0 ? 1 : 0);
    if (!same_schema(I->schema(), g.schema_ref())) throw Error("SchemaMismatch", "random_open_graph needs a graph interface");
    auto pts = [&](int k) {
        std::vector<int> v;
        for (int i = 0; i < k; ++i) v.push_back(std::uniform_int_distribution<int>(0, node_count(g) - 1)(rng));
        return v;
    };
    auto l = pts(left);
    auto r = pts(right);
    return checked(Cospan{I, left, right, g, l, r});
}

} // namespace opensys
