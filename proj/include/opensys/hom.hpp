#pragma once

#include "presheaf.hpp"

#include <functional>

namespace opensys {

struct HomOptions {
    bool monic = false;
    // per sort, a required image or -1; empty means unconstrained
    std::vector<std::vector<int>> fixed;
};

namespace detail {

class HomSearch {
public:
    HomSearch(const Presheaf& x, const Presheaf& y, const HomOptions& opt,
              const std::function<bool(const Morphism&)>& visit)
        : x_(x), y_(y), c_(x.schema()), opt_(opt), visit_(visit) {
        const int ns = c_.sort_count();
        map_.resize(ns);
        used_.resize(ns);
        for (int s = 0; s < ns; ++s) {
            map_[s].assign(x.size(s), -1);
            used_[s].assign(y.size(s), 0);
        }
        // Sorts with more outgoing arrows first: assigning them forces more.
        std::vector<int> order(ns);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return c_.arrows_from(a).size() > c_.arrows_from(b).size();
        });
        for (int s : order)
            for (int e = 0; e < x.size(s); ++e) queue_.emplace_back(s, e);
    }

    void run() {
        for (int s = 0; s < c_.sort_count(); ++s) {
            if (x_.size(s) > 0 && y_.size(s) == 0) return;
            if (opt_.monic && x_.size(s) > y_.size(s)) return;
        }
        if (!opt_.fixed.empty())
            for (int s = 0; s < c_.sort_count(); ++s)
                for (int e = 0; e < static_cast<int>(opt_.fixed[s].size()); ++e) {
                    const int v = opt_.fixed[s][e];
                    if (v < 0) continue;
                    if (map_[s][e] >= 0) {
                        if (map_[s][e] != v) return;
                        continue;
                    }
                    if (!assign(s, e, v)) return;
                }
        search(0);
    }

private:
    bool assign(int s, int e, int v) {
        // push (s, e, v) and propagate along arrows
        std::vector<std::pair<int, int>> stack{{s, e}};
        if (!place(s, e, v)) return false;
        while (!stack.empty()) {
            auto [ss, ee] = stack.back();
            stack.pop_back();
            for (int a : c_.arrows_from(ss)) {
                const int d = c_.arrows[a].dst;
                const int xe = x_.act(a, ee);
                const int yv = y_.act(a, map_[ss][ee]);
                if (map_[d][xe] >= 0) {
                    if (map_[d][xe] != yv) return false;
                    continue;
                }
                if (!place(d, xe, yv)) return false;
                stack.emplace_back(d, xe);
            }
        }
        return true;
    }

    bool place(int s, int e, int v) {
        if (x_.label(s, e) != y_.label(s, v)) return false;
        // used_ only matters in monic mode, where each image is taken once
        if (opt_.monic && used_[s][v]) return false;
        map_[s][e] = v;
        used_[s][v] = 1;
        trail_.emplace_back(s, e);
        return true;
    }

    void undo(std::size_t mark) {
        while (trail_.size() > mark) {
            auto [s, e] = trail_.back();
            trail_.pop_back();
            used_[s][map_[s][e]] = 0;
            map_[s][e] = -1;
        }
    }

    void search(std::size_t qi) {
        if (stop_) return;
        while (qi < queue_.size() && map_[queue_[qi].first][queue_[qi].second] >= 0) ++qi;
        if (qi == queue_.size()) {
            stop_ = !visit_(Morphism{x_, y_, map_});
            return;
        }
        auto [s, e] = queue_[qi];
        for (int v = 0; v < y_.size(s) && !stop_; ++v) {
            if (opt_.monic && used_[s][v]) continue;
            const std::size_t mark = trail_.size();
            if (assign(s, e, v)) search(qi + 1);
            undo(mark);
        }
    }

    const Presheaf& x_;
    const Presheaf& y_;
    const Schema& c_;
    const HomOptions& opt_;
    const std::function<bool(const Morphism&)>& visit_;
    std::vector<std::vector<int>> map_;
    std::vector<std::vector<char>> used_;
    std::vector<std::pair<int, int>> queue_;
    std::vector<std::pair<int, int>> trail_;
    bool stop_ = false;
};

} // namespace detail

// Calls visit on each natural transformation x -> y satisfying opt until
// visit returns false. Order is unspecified.
inline void for_each_hom(const Presheaf& x, const Presheaf& y, const HomOptions& opt,
                         const std::function<bool(const Morphism&)>& visit) {
    require_same_schema(x, y, "hom search");
    detail::HomSearch(x, y, opt, visit).run();
}

inline std::vector<Morphism> hom_enumerate(const Presheaf& x, const Presheaf& y, bool monic_only = false) {
    std::vector<Morphism> out;
    HomOptions opt;
    opt.monic = monic_only;
    for_each_hom(x, y, opt, [&](const Morphism& m) {
        out.push_back(m);
        return true;
    });
    std::sort(out.begin(), out.end(), [](const Morphism& a, const Morphism& b) { return a.comp < b.comp; });
    return out;
}

inline std::optional<Morphism> find_hom(const Presheaf& x, const Presheaf& y, const HomOptions& opt = {}) {
    std::optional<Morphism> out;
    for_each_hom(x, y, opt, [&](const Morphism& m) {
        out = m;
        return false;
    });
    return out;
}

} // namespace opensys
