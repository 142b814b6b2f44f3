#pragma once

#include "dpo.hpp"

#include <numeric>

namespace opensys {

// ---- phases: exact rationals in units of pi, kept in [-1, 1) ----

struct Phase {
    long long num = 0;
    long long den = 1;

    static Phase of(long long p, long long q = 1) {
        if (q == 0) throw Error("ParseError", "phase with zero denominator");
        if (q < 0) p = -p, q = -q;
        const long long g = std::gcd(p < 0 ? -p : p, q);
        if (g > 1) p /= g, q /= g;
        // reduce mod 2: p in [-q, q)
        const long long two = 2 * q;
        p %= two;
        if (p < 0) p += two;
        if (p >= q) p -= two;
        return Phase{p, q};
    }

    Phase operator+(const Phase& o) const { return of(num * o.den + o.num * den, den * o.den); }
    Phase operator-() const { return of(-num, den); }
    Phase operator-(const Phase& o) const { return *this + -o; }
    bool operator==(const Phase& o) const = default;
    bool operator<(const Phase& o) const { return num * o.den < o.num * den; }
    bool is_zero() const { return num == 0; }

    std::string str() const { return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den); }
};

inline Phase parse_phase(const std::string& s) {
    auto slash = s.find('/');
    try {
        std::size_t used = 0;
        long long p = std::stoll(s.substr(0, slash), &used);
        if (used != (slash == std::string::npos ? s.size() : slash)) throw std::invalid_argument(s);
        long long q = 1;
        if (slash != std::string::npos) {
            q = std::stoll(s.substr(slash + 1), &used);
            if (used != s.size() - slash - 1) throw std::invalid_argument(s);
        }
        return Phase::of(p, q);
    } catch (const std::logic_error&) {
        throw Error("ParseError", "bad phase '" + s + "'");
    }
}

// ---- node types ----

enum class ZXKind { white, black, yellow, green, red };

struct ZXType {
    ZXKind kind = ZXKind::white;
    Phase phase;

    bool colored() const { return kind != ZXKind::white; }
    bool spider() const { return kind == ZXKind::green || kind == ZXKind::red; }
    bool operator==(const ZXType&) const = default;

    std::string label() const {
        switch (kind) {
        case ZXKind::white: return "white";
        case ZXKind::black: return "black";
        case ZXKind::yellow: return "yellow";
        case ZXKind::green: return "green:" + phase.str();
        case ZXKind::red: return "red:" + phase.str();
        }
        return "";
    }
};

inline ZXType zx_green(Phase p = {}) { return {ZXKind::green, p}; }
inline ZXType zx_red(Phase p = {}) { return {ZXKind::red, p}; }

inline ZXType parse_zx_type(const std::string& label) {
    if (label == "white") return {ZXKind::white, {}};
    if (label == "black") return {ZXKind::black, {}};
    if (label == "yellow") return {ZXKind::yellow, {}};
    auto colon = label.find(':');
    if (colon != std::string::npos) {
        auto head = label.substr(0, colon);
        if (head == "green") return zx_green(parse_phase(label.substr(colon + 1)));
        if (head == "red") return zx_red(parse_phase(label.substr(colon + 1)));
    }
    throw Error("ParseError", "unknown ZX node type '" + label + "'");
}

inline const InterfaceRef& zx_interface() {
    static const InterfaceRef I = std::make_shared<const Interface>(GRAPH(), "n", "white");
    return I;
}

// Node labels of a graph apex, one per node.
inline std::vector<std::string> node_labels(const Presheaf& g) { return g.sort_labels(g.schema().sort_index("n")); }

inline bool is_pattern_label(const std::string& l) { return l.find('$') != std::string::npos; }

// Edges join white to white or white to colored; legs sit on white nodes.
inline std::vector<Violation> validate_zx_graph(const Presheaf& g, bool allow_patterns = false) {
    std::vector<Violation> out;
    if (!same_schema(g.schema_ref(), GRAPH())) {
        out.push_back({"SchemaMismatch", "ZX diagrams live on GRAPH"});
        return out;
    }
    GraphView v(g.schema());
    std::vector<char> white(g.size(v.n), 0);
    for (int x = 0; x < g.size(v.n); ++x) {
        const auto& l = g.label(v.n, x);
        if (allow_patterns && is_pattern_label(l)) {
            auto c = l.find(':');
            auto head = l.substr(0, c);
            if (c == std::string::npos || (head != "green" && head != "red"))
                out.push_back({"ParseError", "bad pattern label '" + l + "'"});
            continue;
        }
        try {
            white[x] = parse_zx_type(l).kind == ZXKind::white;
        } catch (const Error& e) {
            out.push_back({e.code(), e.detail()});
        }
    }
    for (int e = 0; e < g.size(v.e); ++e) {
        const int a = g.act(v.s, e), b = g.act(v.t, e);
        if (!white[a] && !white[b])
            out.push_back({"GammaViolation", "edge " + std::to_string(e) + " joins two colored nodes"});
    }
    return out;
}

inline std::vector<Violation> validate_zx(const Cospan& c) {
    auto out = validate_cospan(c);
    if (!out.empty()) return out;
    if (!(*c.iface == *zx_interface())) out.push_back({"InterfaceMismatch", "ZX diagrams use white-node feet"});
    for (auto& v : validate_zx_graph(c.apex)) out.push_back(v);
    return out;
}

inline Cospan checked_zx(Cospan c) {
    auto v = validate_zx(c);
    if (!v.empty()) throw Error(v.front().code, v.front().detail);
    return c;
}

// ---- generators ----

struct ZXBuilder {
    std::vector<std::string> labels;
    std::vector<std::pair<int, int>> edges;

    int node(const std::string& l) {
        labels.push_back(l);
        return static_cast<int>(labels.size()) - 1;
    }
    int white() { return node("white"); }
    void edge(int a, int b) { edges.emplace_back(a, b); }
    Presheaf graph() const { return make_graph(static_cast<int>(labels.size()), edges, labels); }
};

inline Cospan zx_spider(ZXType type, int n, int m) {
    if (!type.spider()) throw Error("ArityMismatch", "spiders are green or red");
    ZXBuilder b;
    std::vector<int> in, out;
    for (int i = 0; i < n; ++i) in.push_back(b.white());
    for (int i = 0; i < m; ++i) out.push_back(b.white());
    const int c = b.node(type.label());
    for (int i : in) b.edge(i, c);
    for (int o : out) b.edge(c, o);
    return checked_zx(Cospan{zx_interface(), n, m, b.graph(), in, out});
}

inline void require_arity(const std::string& kind, int n, int m, int want_n, int want_m) {
    if (n != want_n || m != want_m)
        throw Error("ArityMismatch", kind + " is " + std::to_string(want_n) + " -> " + std::to_string(want_m) +
                                         ", asked for " + std::to_string(n) + " -> " + std::to_string(m));
}

inline Cospan zx_generator(const std::string& kind, int n, int m, Phase phase = {}) {
    const auto& I = zx_interface();
    ZXBuilder b;
    if (kind == "green") return zx_spider(zx_green(phase), n, m);
    if (kind == "red") return zx_spider(zx_red(phase), n, m);
    static const std::map<std::string, std::pair<int, int>> monoid{
        {"mult", {2, 1}}, {"comult", {1, 2}}, {"unit", {0, 1}}, {"counit", {1, 0}}};
    if (auto it = monoid.find(kind); it != monoid.end()) {
        require_arity(kind, n, m, it->second.first, it->second.second);
        return zx_spider(zx_green(), n, m);
    }
    if (kind == "wire") {
        require_arity(kind, n, m, 1, 1);
        int a = b.white(), c = b.white();
        b.edge(a, c);
        return checked_zx(Cospan{I, 1, 1, b.graph(), {a}, {c}});
    }
    if (kind == "diamond") {
        require_arity(kind, n, m, 0, 0);
        b.node("black");
        return checked_zx(Cospan{I, 0, 0, b.graph(), {}, {}});
    }
    if (kind == "hadamard") {
        require_arity(kind, n, m, 1, 1);
        int a = b.white(), h = b.node("yellow"), c = b.white();
        b.edge(a, h);
        b.edge(h, c);
        return checked_zx(Cospan{I, 1, 1, b.graph(), {a}, {c}});
    }
    if (kind == "cup") {
        require_arity(kind, n, m, 2, 0);
        int a = b.white(), c = b.white(), mid = b.white();
        b.edge(a, mid);
        b.edge(c, mid);
        return checked_zx(Cospan{I, 2, 0, b.graph(), {a, c}, {}});
    }
    if (kind == "cap") {
        require_arity(kind, n, m, 0, 2);
        int a = b.white(), c = b.white(), mid = b.white();
        b.edge(mid, a);
        b.edge(mid, c);
        return checked_zx(Cospan{I, 0, 2, b.graph(), {}, {a, c}});
    }
    if (kind == "braid") {
        require_arity(kind, n, m, 2, 2);
        for (int i = 0; i < 4; ++i) b.white();
        b.edge(0, 3);
        b.edge(1, 2);
        return checked_zx(Cospan{I, 2, 2, b.graph(), {0, 1}, {2, 3}});
    }
    throw Error("ArityMismatch", "unknown generator '" + kind + "'");
}

// Reverses every edge, swaps the feet and negates spider phases.
inline Cospan dagger(const Cospan& c) {
    const Presheaf& g = c.apex;
    GraphView v(g.schema());
    auto act = g.actions();
    std::swap(act[v.s], act[v.t]);
    auto labels = g.labels();
    labels[v.n] = g.sort_labels(v.n);
    for (auto& l : labels[v.n]) {
        ZXType t = parse_zx_type(l);
        if (t.spider()) t.phase = -t.phase;
        l = t.label();
    }
    return checked_zx(Cospan{c.iface, c.right, c.left, Presheaf(g.schema_ref(), g.sizes(), act, labels), c.rleg, c.lleg});
}

// ---- rule schemas with phase variables ----

// Pattern labels are "green:EXPR" or "red:EXPR" where EXPR is a signed sum
// of $variables and rationals, e.g. "green:$a+$b" or "red:-$a+1/2".
inline std::vector<std::pair<int, std::string>> phase_terms(const std::string& expr) {
    std::vector<std::pair<int, std::string>> out;
    std::size_t i = 0;
    while (i < expr.size()) {
        int sign = 1;
        while (i < expr.size() && (expr[i] == '+' || expr[i] == '-')) {
            if (expr[i] == '-') sign = -sign;
            ++i;
        }
        std::size_t j = i;
        while (j < expr.size() && expr[j] != '+' && expr[j] != '-') ++j;
        if (j == i) throw Error("ParseError", "empty term in phase expression '" + expr + "'");
        out.emplace_back(sign, expr.substr(i, j - i));
        i = j;
    }
    if (out.empty()) throw Error("ParseError", "empty phase expression");
    return out;
}

inline std::set<std::string> label_variables(const std::string& label) {
    std::set<std::string> out;
    auto c = label.find(':');
    if (c == std::string::npos || !is_pattern_label(label)) return out;
    for (auto& [s, t] : phase_terms(label.substr(c + 1)))
        if (t[0] == '$') out.insert(t.substr(1));
    return out;
}

inline std::string substitute_label(const std::string& label, const std::map<std::string, Phase>& env) {
    if (!is_pattern_label(label)) return label;
    auto c = label.find(':');
    Phase p;
    for (auto& [s, t] : phase_terms(label.substr(c + 1))) {
        Phase x;
        if (t[0] == '$') {
            auto it = env.find(t.substr(1));
            if (it == env.end()) throw Error("ValidationError", "unbound phase variable " + t);
            x = it->second;
        } else {
            x = parse_phase(t);
        }
        p = p + (s < 0 ? -x : x);
    }
    return label.substr(0, c + 1) + p.str();
}

struct RuleSchema {
    std::string name;
    RuleKind kind = RuleKind::bold;
    Morphism leg_l;  // k -> l, labels may be patterns
    Morphism leg_r;  // k -> r
    bool certified = true;

    std::set<std::string> variables() const {
        std::set<std::string> out;
        for (const auto& l : node_labels(leg_l.dst))
            for (auto& v : label_variables(l)) out.insert(v);
        return out;
    }
};

inline std::vector<Violation> validate_rule_schema(const RuleSchema& s) {
    std::vector<Violation> out;
    for (const auto* g : {&s.leg_l.dst, &s.leg_l.src, &s.leg_r.dst})
        for (auto& v : validate_zx_graph(*g, true)) out.push_back({v.code, s.name + ": " + v.detail});
    if (!out.empty()) return out;
    auto vars = s.variables();
    for (const auto* g : {&s.leg_l.src, &s.leg_r.dst})
        for (const auto& l : node_labels(*g))
            for (auto& v : label_variables(l))
                if (!vars.count(v)) out.push_back({"ValidationError", s.name + ": $" + v + " does not occur on the left"});
    for (const auto& l : node_labels(s.leg_l.dst))
        if (is_pattern_label(l))
            for (auto& [sign, t] : phase_terms(l.substr(l.find(':') + 1)))
                if (t[0] != '$' || sign < 0)
                    out.push_back({"ValidationError", s.name + ": left-side patterns are single variables"});
    return out;
}

inline Presheaf substitute(const Presheaf& g, const std::map<std::string, Phase>& env) {
    auto labels = g.labels();
    for (auto& per_sort : labels)
        for (auto& l : per_sort) l = substitute_label(l, env);
    return relabel(g, labels);
}

inline Rule instantiate(const RuleSchema& s, const std::map<std::string, Phase>& env) {
    std::string name = s.name;
    if (!env.empty()) {
        name += "{";
        bool first = true;
        for (const auto& [k, v] : env) {
            name += (first ? "" : ",") + k + "=" + v.str();
            first = false;
        }
        name += "}";
    }
    Presheaf k = substitute(s.leg_l.src, env), l = substitute(s.leg_l.dst, env), r = substitute(s.leg_r.dst, env);
    return make_rule(name, s.kind, Morphism{k, l, s.leg_l.comp}, Morphism{k, r, s.leg_r.comp});
}

// One instance per assignment of the left side's variables to phases of the
// same color occurring in the host.
inline std::vector<Rule> instantiate_on(const RuleSchema& s, const Presheaf& host) {
    auto vars = s.variables();
    if (vars.empty()) return {instantiate(s, {})};
    std::set<Phase> phases;
    for (const auto& l : node_labels(host)) {
        auto t = parse_zx_type(l);
        if (t.spider()) phases.insert(t.phase);
    }
    std::vector<std::string> names(vars.begin(), vars.end());
    std::vector<Phase> pool(phases.begin(), phases.end());
    std::vector<Rule> out;
    if (pool.empty()) return out;
    std::vector<std::size_t> idx(names.size(), 0);
    while (true) {
        std::map<std::string, Phase> env;
        for (std::size_t i = 0; i < names.size(); ++i) env[names[i]] = pool[idx[i]];
        out.push_back(instantiate(s, env));
        std::size_t i = 0;
        while (i < idx.size() && ++idx[i] == pool.size()) idx[i++] = 0;
        if (i == idx.size()) break;
    }
    return out;
}

inline Morphism node_map(const Presheaf& from, const Presheaf& to, std::vector<int> nodes, std::vector<int> edges = {}) {
    return checked(Morphism{from, to, {std::move(edges), std::move(nodes)}});
}

inline RuleSchema cup_schema(bool mirror) {
    ZXBuilder l, r;
    int a = l.white(), b = l.white(), c = l.white();
    int ra = r.white(), rb = r.white(), g = r.node("green:0");
    if (!mirror) {
        l.edge(a, c), l.edge(b, c), r.edge(ra, g), r.edge(rb, g);
    } else {
        l.edge(c, a), l.edge(c, b), r.edge(g, ra), r.edge(g, rb);
    }
    Presheaf k = make_graph(2, {}, {"white", "white"});
    return {mirror ? "cap" : "cup", RuleKind::fine, node_map(k, l.graph(), {0, 1}), node_map(k, r.graph(), {0, 1})};
}

inline RuleSchema wire_schema() {
    Presheaf l = make_graph(2, {{0, 1}}, {"white", "white"});
    Presheaf k = make_graph(2, {}, {"white", "white"});
    Presheaf r = make_graph(1, {}, {"white"});
    return {"wire", RuleKind::bold, node_map(k, l, {0, 1}), node_map(k, r, {0, 0})};
}

inline RuleSchema trivial_spider_schema(ZXKind color) {
    const std::string c = color == ZXKind::green ? "green" : "red";
    Presheaf l = make_graph(3, {{0, 2}, {2, 1}}, {"white", "white", c + ":0"});
    Presheaf k = make_graph(2, {}, {"white", "white"});
    Presheaf r = make_graph(2, {{0, 1}}, {"white", "white"});
    return {"trivial-spider-" + c, RuleKind::fine, node_map(k, l, {0, 1}), node_map(k, r, {0, 1})};
}

// Two spiders of one color joined through a white node w (c1 -> w -> c2),
// c1 with arity n1 -> m1 and c2 with n2 -> m2, fuse into one spider with
// the sum of the phases.
inline RuleSchema spider_fuse_schema(ZXKind color, int n1, int m1, int n2, int m2) {
    if (m1 < 1 || n2 < 1) throw Error("ArityMismatch", "fused spiders need a connecting wire");
    const std::string c = color == ZXKind::green ? "green" : "red";
    ZXBuilder l, r;
    const int c1 = l.node(c + ":$a"), c2 = l.node(c + ":$b"), w = l.white();
    std::vector<int> kl;  // k's whites in l
    l.edge(c1, w);
    l.edge(w, c2);
    ZXBuilder k;
    std::vector<int> kr;
    auto boundary = [&](int center, bool into) {
        int x = l.white();
        into ? l.edge(x, center) : l.edge(center, x);
        kl.push_back(x);
        kr.push_back(r.white());
        k.white();
        return static_cast<int>(kr.size()) - 1;
    };
    std::vector<std::pair<int, bool>> rim;
    for (int i = 0; i < n1; ++i) rim.emplace_back(boundary(c1, true), true);
    for (int i = 0; i + 1 < m1; ++i) rim.emplace_back(boundary(c1, false), false);
    for (int i = 0; i + 1 < n2; ++i) rim.emplace_back(boundary(c2, true), true);
    for (int i = 0; i < m2; ++i) rim.emplace_back(boundary(c2, false), false);
    const int fused = r.node(c + ":$a+$b");
    for (auto [i, into] : rim) into ? r.edge(kr[i], fused) : r.edge(fused, kr[i]);
    Presheaf kg = k.graph();
    auto name = "spider-fuse[" + c + " " + std::to_string(n1) + "," + std::to_string(m1) + "|" + std::to_string(n2) +
                "," + std::to_string(m2) + "]";
    return {name, RuleKind::fine, node_map(kg, l.graph(), kl), node_map(kg, r.graph(), kr)};
}

struct ZXPack {
    std::vector<RuleSchema> schemas;
    bool spider_fusion = true;
    int max_arity = 8;
};

inline ZXPack builtin_pack() {
    return {{cup_schema(false), cup_schema(true), wire_schema(), trivial_spider_schema(ZXKind::green),
             trivial_spider_schema(ZXKind::red)},
            true,
            8};
}

inline ZXPack merge_packs(ZXPack a, const ZXPack& b) {
    for (const auto& s : b.schemas) a.schemas.push_back(s);
    a.spider_fusion = a.spider_fusion || b.spider_fusion;
    a.max_arity = std::max(a.max_arity, b.max_arity);
    return a;
}

// Every (color, n1, m1, n2, m2) of a fusable spider pair in the host.
inline std::set<std::tuple<ZXKind, int, int, int, int>> fusable_arities(const Presheaf& g, int max_arity) {
    GraphView v(g.schema());
    const int nn = g.size(v.n);
    std::vector<ZXType> type;
    for (const auto& l : node_labels(g)) type.push_back(parse_zx_type(l));
    std::vector<int> in(nn, 0), out(nn, 0);
    std::vector<std::vector<int>> succ(nn);
    for (int e = 0; e < g.size(v.e); ++e) {
        const int a = g.act(v.s, e), b = g.act(v.t, e);
        ++out[a], ++in[b];
        succ[a].push_back(b);
    }
    std::set<std::tuple<ZXKind, int, int, int, int>> res;
    for (int c1 = 0; c1 < nn; ++c1) {
        if (!type[c1].spider() || in[c1] + out[c1] > max_arity) continue;
        for (int w : succ[c1]) {
            if (type[w].colored()) continue;
            for (int c2 : succ[w])
                if (c2 != c1 && type[c2].kind == type[c1].kind && in[c2] + out[c2] <= max_arity)
                    res.emplace(type[c1].kind, in[c1], out[c1], in[c2], out[c2]);
        }
    }
    return res;
}

// The pack instantiated for one host, as an ordinary grammar with monic
// matches on the white-feet interface.
inline Grammar zx_grammar_for(const ZXPack& pack, const Presheaf& host) {
    Grammar gr{zx_interface(), {}, true};
    std::set<std::string> names;
    auto add = [&](Rule r) {
        if (names.insert(r.name).second) gr.rules.push_back(std::move(r));
    };
    std::vector<RuleSchema> schemas = pack.schemas;
    if (pack.spider_fusion)
        for (auto [c, n1, m1, n2, m2] : fusable_arities(host, pack.max_arity))
            schemas.push_back(spider_fuse_schema(c, n1, m1, n2, m2));
    for (const auto& s : schemas)
        for (auto& r : instantiate_on(s, host)) add(std::move(r));
    return gr;
}

struct ZXStep {
    OpenStep step;
    Rule rule;
};

inline std::vector<ZXStep> zx_one_step(const ZXPack& pack, const Cospan& d) {
    Grammar gr = zx_grammar_for(pack, d.apex);
    std::vector<ZXStep> out;
    for (auto& st : one_step_open(gr, d)) {
        auto v = validate_zx(st.after);
        if (!v.empty()) throw Error("GammaViolation", st.step.rule + " broke typing: " + v.front().detail);
        Rule r = gr.rule(st.step.rule);
        out.push_back({std::move(st), std::move(r)});
    }
    return out;
}

struct ZXDerivation {
    OpenDerivation derivation;
    Grammar rules;  // the instantiated rules the steps refer to

    int size() const { return static_cast<int>(derivation.steps.size()); }
    const Cospan& end() const { return derivation.end(); }
};

inline ZXDerivation zx_derivation_from(const Cospan& start, std::vector<ZXStep> path) {
    ZXDerivation out{{start, {}}, {zx_interface(), {}, true}};
    std::set<std::string> names;
    for (auto& s : path) {
        if (names.insert(s.rule.name).second) out.rules.rules.push_back(s.rule);
        out.derivation.steps.push_back(std::move(s.step));
    }
    return out;
}

inline bool verify_zx_derivation(const ZXDerivation& d) {
    if (!verify_open_derivation(d.rules, d.derivation)) return false;
    if (!validate_zx(d.derivation.start).empty()) return false;
    for (const auto& st : d.derivation.steps)
        if (!validate_zx(st.after).empty()) return false;
    return true;
}

// Shortest derivation from `from` to a diagram isomorphic to `to`.
inline std::optional<ZXDerivation> zx_search(const ZXPack& pack, const Cospan& from, const Cospan& to,
                                             SearchLimits lim = {}) {
    checked_zx(from), checked_zx(to);
    if (from.left != to.left || from.right != to.right) return std::nullopt;
    auto path = bfs_path<Cospan, ZXStep>(
        from, cospan_key(to), [](const Cospan& c) { return cospan_key(c); },
        [&](const Cospan& c) { return zx_one_step(pack, c); }, [](const ZXStep& s) { return s.step.after; }, lim);
    if (!path) return std::nullopt;
    return zx_derivation_from(from, std::move(*path));
}

enum class ZXStrategy { first_match, exhaustive_bfs };

inline int zx_size(const Cospan& c) { return node_count(c.apex) + edge_count(c.apex); }

// first-match applies the first available step (in key order) until none
// is left; exhaustive-bfs returns a shortest path to the smallest diagram
// reachable within the budget, ties broken by key.
inline ZXDerivation zx_simplify(const ZXPack& pack, const Cospan& d, ZXStrategy strategy, int budget) {
    checked_zx(d);
    if (strategy == ZXStrategy::first_match) {
        std::vector<ZXStep> path;
        Cospan cur = d;
        for (int i = 0; i < budget; ++i) {
            auto next = zx_one_step(pack, cur);
            if (next.empty()) break;
            cur = next.front().step.after;
            path.push_back(std::move(next.front()));
        }
        return zx_derivation_from(d, std::move(path));
    }
    struct Node {
        Cospan c;
        int parent;
        std::optional<ZXStep> via;
        int depth;
    };
    std::vector<Node> nodes{{d, -1, std::nullopt, 0}};
    std::unordered_map<std::string, int> seen{{cospan_key(d), 0}};
    int best = 0;
    std::string best_key = cospan_key(d);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].depth >= budget) continue;
        for (auto& st : zx_one_step(pack, nodes[i].c)) {
            auto key = cospan_key(st.step.after);
            if (seen.count(key)) continue;
            const int id = static_cast<int>(nodes.size());
            seen.emplace(key, id);
            Cospan after = st.step.after;
            nodes.push_back({std::move(after), static_cast<int>(i), std::move(st), nodes[i].depth + 1});
            const int sz = zx_size(nodes.back().c), bsz = zx_size(nodes[best].c);
            if (sz < bsz || (sz == bsz && key < best_key)) best = id, best_key = key;
        }
    }
    std::vector<ZXStep> path;
    for (int i = best; nodes[i].parent >= 0; i = nodes[i].parent) path.push_back(*nodes[i].via);
    std::reverse(path.begin(), path.end());
    return zx_derivation_from(d, std::move(path));
}

inline std::set<std::string> zx_reachable_keys(const ZXPack& pack, const Cospan& d, int budget) {
    std::set<std::string> seen{cospan_key(d)};
    std::vector<Cospan> frontier{d};
    for (int i = 0; i < budget && !frontier.empty(); ++i) {
        std::vector<Cospan> next;
        for (const auto& c : frontier)
            for (auto& st : zx_one_step(pack, c))
                if (seen.insert(cospan_key(st.step.after)).second) next.push_back(st.step.after);
        frontier = std::move(next);
    }
    return seen;
}

// Joinability within the budget: both sides rewrite to a common diagram.
inline bool decat_equal(const ZXPack& pack, const Cospan& d1, const Cospan& d2, int budget) {
    if (d1.left != d2.left || d1.right != d2.right) return false;
    auto a = zx_reachable_keys(pack, d1, budget);
    auto b = zx_reachable_keys(pack, d2, budget);
    return std::any_of(a.begin(), a.end(), [&](const std::string& k) { return b.count(k) > 0; });
}

} // namespace opensys
