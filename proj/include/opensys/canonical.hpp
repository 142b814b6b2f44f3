#pragma once

#include "presheaf.hpp"

#include <cstdint>
#include <functional>
#include <set>

namespace opensys {

struct CanonicalForm {
    std::string key;
    std::vector<std::vector<int>> perm;  // perm[s][old] = canonical position
};

namespace detail {

class Canonizer {
public:
    explicit Canonizer(const Presheaf& x) : x_(x), c_(x.schema()) {
        const int ns = c_.sort_count();
        offset_.assign(ns + 1, 0);
        for (int s = 0; s < ns; ++s) offset_[s + 1] = offset_[s] + x.size(s);
        n_ = offset_[ns];
        sort_of_.resize(n_);
        for (int s = 0; s < ns; ++s)
            for (int e = 0; e < x.size(s); ++e) sort_of_[offset_[s] + e] = s;
        std::set<std::string> distinct;
        for (int s = 0; s < ns; ++s)
            for (int e = 0; e < x.size(s); ++e) distinct.insert(x.label(s, e));
        labels_.assign(distinct.begin(), distinct.end());
        label_id_.resize(n_);
        for (int u = 0; u < n_; ++u) {
            const std::string& l = x.label(sort_of_[u], u - offset_[sort_of_[u]]);
            label_id_[u] = static_cast<int>(std::lower_bound(labels_.begin(), labels_.end(), l) - labels_.begin());
        }
        out_.assign(n_, {});
        pre_.assign(n_, {});
        for (int u = 0; u < n_; ++u) pre_[u].assign(c_.arrow_count(), {});
        for (int a = 0; a < c_.arrow_count(); ++a) {
            const int s = c_.arrows[a].src, d = c_.arrows[a].dst;
            for (int e = 0; e < x.size(s); ++e) {
                const int u = offset_[s] + e, v = offset_[d] + x.act(a, e);
                out_[u].push_back(v);
                pre_[v][a].push_back(u);
            }
        }
    }

    CanonicalForm run() {
        std::vector<int> col(n_);
        std::vector<std::vector<int>> sig(n_);
        for (int u = 0; u < n_; ++u) sig[u] = {sort_of_[u], label_id_[u]};
        rank(sig, col);
        refine(col);
        std::vector<int> prefix;
        search(col, prefix);

        CanonicalForm cf;
        cf.perm.resize(c_.sort_count());
        for (int s = 0; s < c_.sort_count(); ++s) {
            cf.perm[s].resize(x_.size(s));
            for (int e = 0; e < x_.size(s); ++e) cf.perm[s][e] = best_col_[offset_[s] + e] - offset_[s];
        }
        std::string k = c_.name + "|";
        for (int s = 0; s < c_.sort_count(); ++s) k += std::to_string(x_.size(s)) + ",";
        k += "|";
        for (const auto& l : labels_) k += l + ";";
        k += "|";
        for (int v : best_cert_) k += std::to_string(v) + ",";
        cf.key = std::move(k);
        return cf;
    }

private:
    static void rank(const std::vector<std::vector<int>>& sig, std::vector<int>& col) {
        std::vector<int> idx(sig.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return sig[a] < sig[b]; });
        // colour = position of the first element of the cell, so that
        // discrete partitions give positions directly
        for (std::size_t i = 0; i < idx.size(); ++i)
            col[idx[i]] = (i > 0 && sig[idx[i]] == sig[idx[i - 1]]) ? col[idx[i - 1]] : static_cast<int>(i);
    }

    static int cell_count(const std::vector<int>& col) {
        std::set<int> s(col.begin(), col.end());
        return static_cast<int>(s.size());
    }

    void refine(std::vector<int>& col) const {
        int cells = cell_count(col);
        std::vector<std::vector<int>> sig(n_);
        while (true) {
            for (int u = 0; u < n_; ++u) {
                auto& g = sig[u];
                g.clear();
                g.push_back(col[u]);
                for (int v : out_[u]) g.push_back(col[v]);
                for (const auto& p : pre_[u]) {
                    std::vector<int> cs;
                    for (int w : p) cs.push_back(col[w]);
                    std::sort(cs.begin(), cs.end());
                    g.push_back(-1 - static_cast<int>(cs.size()));
                    g.insert(g.end(), cs.begin(), cs.end());
                }
            }
            rank(sig, col);
            const int now = cell_count(col);
            if (now == cells) return;
            cells = now;
        }
    }

    std::vector<int> certificate(const std::vector<int>& col) const {
        std::vector<int> inv(n_);
        for (int u = 0; u < n_; ++u) inv[col[u]] = u;
        std::vector<int> cert;
        for (int p = 0; p < n_; ++p) cert.push_back(label_id_[inv[p]]);
        for (int a = 0; a < c_.arrow_count(); ++a) {
            const int s = c_.arrows[a].src, d = c_.arrows[a].dst;
            for (int p = offset_[s]; p < offset_[s + 1]; ++p) {
                const int u = inv[p] - offset_[s];
                cert.push_back(col[offset_[d] + x_.act(a, u)] - offset_[d]);
            }
        }
        return cert;
    }

    void search(const std::vector<int>& col, std::vector<int>& prefix) {
        // first non-singleton cell, by colour
        std::vector<int> count(n_, 0);
        for (int u = 0; u < n_; ++u) ++count[col[u]];
        int target = -1;
        for (int c = 0; c < n_; ++c)
            if (count[c] > 1) {
                target = c;
                break;
            }
        if (target < 0) {
            auto cert = certificate(col);
            if (!have_best_ || cert < best_cert_) {
                best_cert_ = std::move(cert);
                best_col_ = col;
                have_best_ = true;
            } else if (cert == best_cert_) {
                // automorphism u -> w where best position of w equals position of u
                std::vector<int> inv(n_), aut(n_);
                for (int u = 0; u < n_; ++u) inv[best_col_[u]] = u;
                for (int u = 0; u < n_; ++u) aut[u] = inv[col[u]];
                autos_.push_back(std::move(aut));
            }
            return;
        }
        std::vector<int> cell;
        for (int u = 0; u < n_; ++u)
            if (col[u] == target) cell.push_back(u);
        std::vector<int> explored;
        for (int v : cell) {
            if (!explored.empty() && same_orbit(v, explored, prefix)) continue;
            explored.push_back(v);
            std::vector<std::vector<int>> sig(n_);
            for (int u = 0; u < n_; ++u) sig[u] = {col[u], u == v ? 0 : 1};
            std::vector<int> next(n_);
            rank(sig, next);
            refine(next);
            prefix.push_back(v);
            search(next, prefix);
            prefix.pop_back();
        }
    }

    bool same_orbit(int v, const std::vector<int>& explored, const std::vector<int>& prefix) const {
        std::vector<int> parent(n_);
        std::iota(parent.begin(), parent.end(), 0);
        std::function<int(int)> find = [&](int a) { return parent[a] == a ? a : parent[a] = find(parent[a]); };
        for (const auto& g : autos_) {
            bool fixes = true;
            for (int p : prefix)
                if (g[p] != p) {
                    fixes = false;
                    break;
                }
            if (!fixes) continue;
            for (int u = 0; u < n_; ++u) parent[find(u)] = find(g[u]);
        }
        for (int w : explored)
            if (find(w) == find(v)) return true;
        return false;
    }

    const Presheaf& x_;
    const Schema& c_;
    std::vector<int> offset_, sort_of_, label_id_;
    std::vector<std::string> labels_;
    std::vector<std::vector<int>> out_;
    std::vector<std::vector<std::vector<int>>> pre_;
    int n_ = 0;
    bool have_best_ = false;
    std::vector<int> best_cert_, best_col_;
    std::vector<std::vector<int>> autos_;
};

} // namespace detail

// Deterministic certificate: equal keys exactly for isomorphic presheaves
// (labels included). Colour refinement plus individualisation, with orbit
// pruning by the automorphisms discovered along the way.
inline CanonicalForm canonical_form(const Presheaf& x) { return detail::Canonizer(x).run(); }

inline std::string canonical_key(const Presheaf& x) { return canonical_form(x).key; }

inline std::string short_hash(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    static const char* hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4) out[i] = hex[h & 15];
    return out;
}

// The presheaf rewritten in canonical element order.
inline Presheaf canonical_presheaf(const Presheaf& x, const CanonicalForm& cf) {
    const Schema& c = x.schema();
    std::vector<std::vector<int>> act(c.arrow_count());
    for (int a = 0; a < c.arrow_count(); ++a) {
        const int s = c.arrows[a].src, d = c.arrows[a].dst;
        act[a].resize(x.size(s));
        for (int e = 0; e < x.size(s); ++e) act[a][cf.perm[s][e]] = cf.perm[d][x.act(a, e)];
    }
    std::vector<std::vector<std::string>> labels(c.sort_count());
    for (int s = 0; s < c.sort_count(); ++s)
        if (!x.labels()[s].empty()) {
            labels[s].resize(x.size(s));
            for (int e = 0; e < x.size(s); ++e) labels[s][cf.perm[s][e]] = x.label(s, e);
        }
    return Presheaf(x.schema_ref(), x.sizes(), act, labels);
}

inline std::optional<Morphism> iso_search(const Presheaf& x, const Presheaf& y) {
    require_same_schema(x, y, "iso_search");
    if (x.sizes() != y.sizes()) return std::nullopt;
    auto fx = canonical_form(x);
    auto fy = canonical_form(y);
    if (fx.key != fy.key) return std::nullopt;
    Morphism m{x, y, {}};
    for (int s = 0; s < x.schema().sort_count(); ++s) {
        std::vector<int> inv(y.size(s));
        for (int e = 0; e < y.size(s); ++e) inv[fy.perm[s][e]] = e;
        m.comp.emplace_back(x.size(s));
        for (int e = 0; e < x.size(s); ++e) m.comp[s][e] = inv[fx.perm[s][e]];
    }
    return m;
}

inline bool isomorphic(const Presheaf& x, const Presheaf& y) { return iso_search(x, y).has_value(); }

} // namespace opensys
