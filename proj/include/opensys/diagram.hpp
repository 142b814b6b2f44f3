#pragma once

#include "canonical.hpp"

namespace opensys {

// A finite diagram of presheaves indexed by a thin shape, packed into one
// presheaf on the product schema. Isomorphism of packed presheaves is
// isomorphism of diagrams, so canonical keys and iso searches carry over.
struct Diagram {
    const Shape* shape;
    std::vector<Presheaf> objects;   // per shape object
    std::vector<Morphism> arrows;    // per shape generator
};

inline Presheaf pack(const Diagram& d) {
    const SchemaRef& c = d.objects.front().schema_ref();
    const ProductSchema& ps = product_schema(c, *d.shape);
    const Schema& S = *d.shape->schema;
    const int ns = c->sort_count();
    std::vector<int> sizes(ps.schema->sort_count());
    std::vector<std::vector<std::string>> labels(ps.schema->sort_count());
    for (int o = 0; o < S.sort_count(); ++o)
        for (int s = 0; s < ns; ++s) {
            sizes[o * ns + s] = d.objects[o].size(s);
            if (!d.objects[o].labels()[s].empty()) labels[o * ns + s] = d.objects[o].labels()[s];
        }
    std::vector<std::vector<int>> act(ps.parts.size());
    for (std::size_t a = 0; a < ps.parts.size(); ++a) {
        const auto& part = ps.parts[a];
        for (int e = 0; e < d.objects[part.o].size(part.s); ++e) {
            int v = e, o = part.o;
            if (part.m != kId)
                for (int g : d.shape->path[part.m]) {
                    v = d.arrows[g].comp[part.s][v];
                    o = S.arrows[g].dst;
                }
            act[a].push_back(d.objects[o].apply(part.x, v));
        }
    }
    return Presheaf(ps.schema, sizes, act, labels);
}

// Component of a morphism of packed diagrams at one shape object.
inline std::vector<std::vector<int>> component_at(const Morphism& m, int object, int c_sorts) {
    std::vector<std::vector<int>> out;
    for (int s = 0; s < c_sorts; ++s) out.push_back(m.comp[object * c_sorts + s]);
    return out;
}

// Tags the interface-sort elements of an L-image with their position so that
// isomorphisms must fix feet pointwise.
inline Presheaf pin_points(const Presheaf& foot, int sort) {
    auto labels = foot.labels();
    labels.resize(foot.schema().sort_count());
    labels[sort].assign(foot.size(sort), "");
    for (int e = 0; e < foot.size(sort); ++e) labels[sort][e] = foot.label(sort, e) + "#" + std::to_string(e);
    return relabel(foot, labels);
}

} // namespace opensys
