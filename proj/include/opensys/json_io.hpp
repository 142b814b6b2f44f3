#pragma once

// JSON encodings of the domain types. Output is canonical: keys sorted,
// no insignificant whitespace.

#include "language.hpp"
#include "zx.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace opensys {

using json = nlohmann::json;

inline std::string canonical_dump(const json& j) { return j.dump(); }

[[noreturn]] inline void parse_fail(const std::string& what) { throw Error("ParseError", what); }

inline const json& field(const json& j, const char* key) {
    if (!j.is_object()) parse_fail(std::string("expected an object holding '") + key + "'");
    auto it = j.find(key);
    if (it == j.end()) parse_fail(std::string("missing field '") + key + "'");
    return *it;
}

template <class T>
T get_as(const json& j, const char* what) {
    try {
        return j.get<T>();
    } catch (const json::exception& e) {
        parse_fail(std::string(what) + ": " + e.what());
    }
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("IOError", "cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        parse_fail(path + ": " + e.what());
    }
}

// ---- schema ----

inline json to_json(const Schema& c) {
    json arrows = json::array(), comp = json::array();
    for (const auto& a : c.arrows) arrows.push_back({{"name", a.name}, {"src", c.sorts[a.src]}, {"dst", c.sorts[a.dst]}});
    for (int f = 0; f < c.arrow_count(); ++f)
        for (int g = 0; g < c.arrow_count(); ++g) {
            const int h = c.table[f][g];
            if (h == kNone) continue;
            comp.push_back({c.arrows[f].name, c.arrows[g].name, h == kId ? std::string("id") : c.arrows[h].name});
        }
    return {{"name", c.name}, {"sorts", c.sorts}, {"arrows", arrows}, {"comp", comp}};
}

// Builtin schemas are written by name.
inline json schema_ref_json(const SchemaRef& c) {
    if (auto b = builtin_schema(c->name); b && *b == *c) return c->name;
    return to_json(*c);
}

inline SchemaRef schema_from_json(const json& j) {
    if (j.is_string()) {
        auto c = builtin_schema(j.get<std::string>());
        if (!c) parse_fail("unknown builtin schema " + j.get<std::string>());
        return c;
    }
    std::vector<std::tuple<std::string, std::string, std::string>> arrows, comps;
    for (const auto& a : get_as<json>(field(j, "arrows"), "arrows"))
        arrows.emplace_back(get_as<std::string>(field(a, "name"), "arrow name"),
                            get_as<std::string>(field(a, "src"), "arrow src"),
                            get_as<std::string>(field(a, "dst"), "arrow dst"));
    if (j.contains("comp"))
        for (const auto& t : j["comp"]) {
            auto v = get_as<std::vector<std::string>>(t, "comp entry");
            if (v.size() != 3) parse_fail("comp entries are [f, g, h]");
            comps.emplace_back(v[0], v[1], v[2]);
        }
    std::string name = j.contains("name") ? get_as<std::string>(j["name"], "schema name") : std::string("custom");
    return make_schema(name, get_as<std::vector<std::string>>(field(j, "sorts"), "sorts"), arrows, comps);
}

// ---- presheaf and morphism ----

inline json to_json(const Presheaf& x) {
    const Schema& c = x.schema();
    json carriers = json::object(), action = json::object(), labels = json::object();
    for (int s = 0; s < c.sort_count(); ++s) {
        carriers[c.sorts[s]] = x.size(s);
        if (!x.labels()[s].empty()) labels[c.sorts[s]] = x.labels()[s];
    }
    for (int a = 0; a < c.arrow_count(); ++a) action[c.arrows[a].name] = x.action(a);
    json out{{"schema", schema_ref_json(x.schema_ref())}, {"carriers", carriers}, {"action", action}};
    if (!labels.empty()) out["labels"] = labels;
    return out;
}

inline Presheaf presheaf_from_json(const json& j, SchemaRef schema = nullptr) {
    if (!schema) schema = schema_from_json(field(j, "schema"));
    const Schema& c = *schema;
    std::vector<int> sizes(c.sort_count(), 0);
    std::vector<std::vector<int>> act(c.arrow_count());
    std::vector<std::vector<std::string>> labels(c.sort_count());
    const json& carriers = field(j, "carriers");
    for (auto it = carriers.begin(); it != carriers.end(); ++it) {
        auto s = c.find_sort(it.key());
        if (!s) parse_fail("unknown sort " + it.key());
        sizes[*s] = get_as<int>(it.value(), "carrier size");
        if (sizes[*s] < 0) parse_fail("negative carrier");
    }
    if (j.contains("action"))
        for (auto it = j["action"].begin(); it != j["action"].end(); ++it) {
            auto a = c.find_arrow(it.key());
            if (!a) parse_fail("unknown arrow " + it.key());
            act[*a] = get_as<std::vector<int>>(it.value(), "action table");
        }
    for (int a = 0; a < c.arrow_count(); ++a)
        if (static_cast<int>(act[a].size()) != sizes[c.arrows[a].src])
            throw Error("ValidationError", "action of " + c.arrows[a].name + " has the wrong length");
    if (j.contains("labels"))
        for (auto it = j["labels"].begin(); it != j["labels"].end(); ++it) {
            auto s = c.find_sort(it.key());
            if (!s) parse_fail("unknown sort " + it.key());
            labels[*s] = get_as<std::vector<std::string>>(it.value(), "labels");
        }
    return checked(Presheaf(schema, sizes, act, labels));
}

inline json components_json(const Morphism& m) {
    json out = json::object();
    const Schema& c = m.src.schema();
    for (int s = 0; s < c.sort_count(); ++s) out[c.sorts[s]] = m.comp[s];
    return out;
}

inline std::vector<std::vector<int>> components_from_json(const json& j, const Schema& c) {
    std::vector<std::vector<int>> comp(c.sort_count());
    for (auto it = j.begin(); it != j.end(); ++it) {
        auto s = c.find_sort(it.key());
        if (!s) parse_fail("unknown sort " + it.key());
        comp[*s] = get_as<std::vector<int>>(it.value(), "component");
    }
    return comp;
}

inline Morphism morphism_with(const Presheaf& src, const Presheaf& dst, const json& comps) {
    Morphism m{src, dst, components_from_json(comps, src.schema())};
    auto v = validate_morphism(m);
    if (!v.empty()) throw Error("ValidationError", v.front().code + ": " + v.front().detail);
    return m;
}

inline json to_json(const Morphism& m) {
    return {{"src", to_json(m.src)}, {"dst", to_json(m.dst)}, {"components", components_json(m)}};
}

inline Morphism morphism_from_json(const json& j) {
    auto src = presheaf_from_json(field(j, "src"));
    auto dst = presheaf_from_json(field(j, "dst"));
    return morphism_with(src, dst, field(j, "components"));
}

inline json pushout_json(const PushoutResult& po) {
    return {{"apex", to_json(po.apex)}, {"legs", {components_json(po.leg_left), components_json(po.leg_right)}}};
}

// ---- interface and cospan ----

inline json to_json(const Interface& I) {
    json out{{"schema", schema_ref_json(I.schema())}, {"interface_sorts", {I.sort_name()}}};
    if (!I.label().empty()) out["label"] = I.label();
    return out;
}

inline InterfaceRef interface_from_json(const json& j) {
    auto schema = schema_from_json(field(j, "schema"));
    auto sorts = get_as<std::vector<std::string>>(field(j, "interface_sorts"), "interface_sorts");
    if (sorts.size() != 1) throw Error("ValidationError", "exactly one interface sort is supported");
    if (!schema->find_sort(sorts[0])) parse_fail("unknown interface sort " + sorts[0]);
    std::string label = j.contains("label") ? get_as<std::string>(j["label"], "label") : std::string();
    return std::make_shared<const Interface>(schema, sorts[0], label);
}

inline InterfaceRef default_interface(const SchemaRef& schema) {
    return std::make_shared<const Interface>(schema, schema->find_sort("n") ? "n" : schema->sorts.front());
}

inline json to_json(const Cospan& c) {
    return {{"interface", to_json(*c.iface)}, {"left_foot", c.left},     {"right_foot", c.right},
            {"apex", to_json(c.apex)},        {"left_leg", c.lleg},      {"right_leg", c.rleg}};
}

inline Cospan cospan_from_json(const json& j, InterfaceRef I = nullptr) {
    Presheaf apex = presheaf_from_json(field(j, "apex"));
    if (j.contains("interface")) I = interface_from_json(j["interface"]);
    if (!I) I = default_interface(apex.schema_ref());
    Cospan c{I,
             get_as<int>(field(j, "left_foot"), "left_foot"),
             get_as<int>(field(j, "right_foot"), "right_foot"),
             apex,
             get_as<std::vector<int>>(field(j, "left_leg"), "left_leg"),
             get_as<std::vector<int>>(field(j, "right_leg"), "right_leg")};
    auto v = validate_cospan(c);
    if (!v.empty()) throw Error("ValidationError", v.front().code + ": " + v.front().detail);
    return c;
}

// ---- ZX diagrams: the cospan format with node types ----

inline json zx_type_json(const std::string& label) {
    auto c = label.find(':');
    if (c == std::string::npos) return label;
    return json{{label.substr(0, c), label.substr(c + 1)}};
}

inline std::string zx_label_from_json(const json& t) {
    if (t.is_string()) return t.get<std::string>();
    if (t.is_object() && t.size() == 1) {
        auto it = t.begin();
        return it.key() + ":" + get_as<std::string>(it.value(), "phase");
    }
    parse_fail("bad ZX node type " + t.dump());
}

// Moves node labels of a graph into a "types" map keyed by node id.
inline json with_types(json j, const Presheaf& g) {
    json types = json::object();
    auto labels = node_labels(g);
    for (std::size_t i = 0; i < labels.size(); ++i) types[std::to_string(i)] = zx_type_json(labels[i]);
    j["types"] = types;
    j.erase("interface");
    return j;
}

inline Presheaf apply_types(const Presheaf& g, const json& types) {
    GraphView v(g.schema());
    std::vector<std::string> labels(g.size(v.n), "white");
    for (auto it = types.begin(); it != types.end(); ++it) {
        int id = -1;
        try {
            id = std::stoi(it.key());
        } catch (const std::logic_error&) {
            parse_fail("node ids in types are integers");
        }
        if (id < 0 || id >= g.size(v.n)) throw Error("ValidationError", "typed node " + it.key() + " does not exist");
        labels[id] = zx_label_from_json(it.value());
    }
    auto all = g.labels();
    all[v.n] = labels;
    return relabel(g, all);
}

inline json zx_to_json(const Cospan& c) {
    json j = to_json(c);
    j["apex"].erase("labels");
    return with_types(j, c.apex);
}

inline Cospan zx_from_json(const json& j) {
    Presheaf apex = presheaf_from_json(field(j, "apex"));
    if (j.contains("types")) apex = apply_types(apex, j["types"]);
    json plain = j;
    plain.erase("types");
    plain.erase("interface");
    plain["apex"] = to_json(apex);
    Cospan c = cospan_from_json(plain, zx_interface());
    auto v = validate_zx(c);
    if (!v.empty()) throw Error("ValidationError", v.front().code + ": " + v.front().detail);
    return c;
}

// ---- rules, grammars, derivations ----

inline json to_json(const Rule& r) {
    return {{"name", r.name},          {"kind", to_string(r.kind)},
            {"l", to_json(r.l())},     {"k", to_json(r.k())},
            {"r", to_json(r.r())},     {"leg_l", components_json(r.leg_l)},
            {"leg_r", components_json(r.leg_r)}};
}

inline RuleKind rule_kind_from_json(const json& j) {
    auto k = get_as<std::string>(j, "kind");
    if (k == "fine") return RuleKind::fine;
    if (k == "bold") return RuleKind::bold;
    parse_fail("rule kind is fine or bold, not " + k);
}

inline Rule rule_from_json(const json& j) {
    auto l = presheaf_from_json(field(j, "l")), k = presheaf_from_json(field(j, "k")), r = presheaf_from_json(field(j, "r"));
    try {
        return make_rule(get_as<std::string>(field(j, "name"), "name"), rule_kind_from_json(field(j, "kind")),
                         morphism_with(k, l, field(j, "leg_l")), morphism_with(k, r, field(j, "leg_r")));
    } catch (const Error& e) {
        if (e.code() == "ParseError" || e.code() == "ValidationError") throw;
        throw Error("ValidationError", e.code() + ": " + e.detail());
    }
}

inline json to_json(const Grammar& g) {
    json rules = json::array();
    for (const auto& r : g.rules) rules.push_back(to_json(r));
    return {{"interface", to_json(*g.iface)}, {"rules", rules}, {"monic_matches", g.monic_matches}};
}

inline Grammar grammar_from_json(const json& j) {
    Grammar g{interface_from_json(field(j, "interface")), {}, false};
    if (j.contains("monic_matches")) g.monic_matches = get_as<bool>(j["monic_matches"], "monic_matches");
    std::set<std::string> names;
    for (const auto& r : get_as<json>(field(j, "rules"), "rules")) {
        g.rules.push_back(rule_from_json(r));
        g.iface->require_schema(g.rules.back().l());
        if (!names.insert(g.rules.back().name).second)
            throw Error("ValidationError", "duplicate rule name " + g.rules.back().name);
    }
    return g;
}

inline json to_json(const Step& st) {
    return {{"rule", st.rule},
            {"match", components_json(st.match)},
            {"d", to_json(st.d())},
            {"h", to_json(st.h())},
            {"k_to_d", components_json(st.k_to_d)},
            {"d_to_g", components_json(st.d_to_g)},
            {"d_to_h", components_json(st.d_to_h)},
            {"r_to_h", components_json(st.r_to_h)}};
}

inline Step step_from_json(const json& j, const Grammar& gr, const Presheaf& g) {
    const Rule& rule = gr.rule(get_as<std::string>(field(j, "rule"), "rule"));
    auto d = presheaf_from_json(field(j, "d")), h = presheaf_from_json(field(j, "h"));
    return Step{rule.name,
                morphism_with(rule.l(), g, field(j, "match")),
                morphism_with(rule.k(), d, field(j, "k_to_d")),
                morphism_with(d, g, field(j, "d_to_g")),
                morphism_with(d, h, field(j, "d_to_h")),
                morphism_with(rule.r(), h, field(j, "r_to_h"))};
}

inline json to_json(const Derivation& d) {
    json steps = json::array();
    for (const auto& st : d.steps) steps.push_back(to_json(st));
    return {{"start", to_json(d.start)}, {"steps", steps}};
}

inline Derivation derivation_from_json(const json& j, const Grammar& gr) {
    Derivation d{presheaf_from_json(field(j, "start")), {}};
    for (const auto& s : get_as<json>(field(j, "steps"), "steps")) d.steps.push_back(step_from_json(s, gr, d.end()));
    return d;
}

// Open derivations carry their grammar, so a trace file is self-contained.
inline json to_json(const OpenDerivation& d, const Grammar& gr) {
    json steps = json::array();
    for (const auto& st : d.steps) {
        json s = to_json(st.step);
        s["after"] = to_json(st.after);
        steps.push_back(s);
    }
    return {{"grammar", to_json(gr)}, {"start", to_json(d.start)}, {"steps", steps}};
}

inline std::pair<Grammar, OpenDerivation> open_derivation_from_json(const json& j) {
    Grammar gr = grammar_from_json(field(j, "grammar"));
    OpenDerivation d{cospan_from_json(field(j, "start"), gr.iface), {}};
    for (const auto& s : get_as<json>(field(j, "steps"), "steps")) {
        Cospan before = d.end();
        Step st = step_from_json(s, gr, before.apex);
        d.steps.push_back(OpenStep{st, before, cospan_from_json(field(s, "after"), gr.iface)});
    }
    return {gr, d};
}

// ---- squares ----

inline json to_json(const Square& s) {
    return {{"rows", {to_json(s.top), to_json(s.mid), to_json(s.bot)}},
            {"v_feet", {s.lup, s.ldown, s.rup, s.rdown}},
            {"v_apex", {to_json(s.up), to_json(s.down)}},
            {"fine", is_square(s, SquareMode::fine)}};
}

inline Square square_from_json(const json& j) {
    const json& rows = field(j, "rows");
    const json& feet = field(j, "v_feet");
    const json& apex = field(j, "v_apex");
    if (!rows.is_array() || rows.size() != 3 || !feet.is_array() || feet.size() != 4 || !apex.is_array() ||
        apex.size() != 2)
        parse_fail("a square has 3 rows, 4 foot maps and 2 apex maps");
    Cospan top = cospan_from_json(rows[0]);
    Cospan mid = cospan_from_json(rows[1], top.iface), bot = cospan_from_json(rows[2], top.iface);
    auto f = [&](int i) { return get_as<std::vector<int>>(feet[i], "foot map"); };
    Square s{top, mid, bot, f(0), f(1), f(2), f(3), morphism_with(mid.apex, top.apex, field(apex[0], "components")),
             morphism_with(mid.apex, bot.apex, field(apex[1], "components"))};
    const bool fine = j.contains("fine") && get_as<bool>(j["fine"], "fine");
    auto v = validate_square(s, fine ? SquareMode::fine : SquareMode::bold);
    if (!v.empty()) throw Error("ValidationError", v.front().code + ": " + v.front().detail);
    return s;
}

// ---- language tools ----

inline json to_json(const Cut& c, const Schema& schema) {
    json side = json::object();
    for (int s = 0; s < schema.sort_count(); ++s) side[schema.sorts[s]] = c.side[s];
    return {{"points", c.points}, {"side", side}};
}

inline Cut cut_from_json(const json& j, const Schema& schema) {
    Cut c{get_as<std::vector<int>>(field(j, "points"), "points"), std::vector<std::vector<int>>(schema.sort_count())};
    const json& side = field(j, "side");
    for (auto it = side.begin(); it != side.end(); ++it) {
        auto s = schema.find_sort(it.key());
        if (!s) parse_fail("unknown sort " + it.key());
        c.side[*s] = get_as<std::vector<int>>(it.value(), "side");
    }
    return c;
}

inline json lifted_grammar_json(const Grammar& gr) {
    json j = to_json(gr);
    json gens = json::array();
    for (const auto& s : lift_grammar(gr)) gens.push_back(to_json(s));
    j["generators"] = gens;
    return j;
}

// ---- ZX rule packs: arrays of rule schemas over typed graphs ----

inline Presheaf zx_graph_from_json(const json& j) {
    Presheaf g = presheaf_from_json(j);
    if (j.contains("types")) g = apply_types(g, j["types"]);
    auto v = validate_zx_graph(g, true);
    if (!v.empty()) throw Error("ValidationError", v.front().code + ": " + v.front().detail);
    return g;
}

inline json zx_graph_json(const Presheaf& g) {
    json j = to_json(g);
    j.erase("labels");
    json types = json::object();
    auto labels = node_labels(g);
    for (std::size_t i = 0; i < labels.size(); ++i) types[std::to_string(i)] = zx_type_json(labels[i]);
    j["types"] = types;
    return j;
}

inline json to_json(const RuleSchema& s) {
    return {{"name", s.name},
            {"kind", to_string(s.kind)},
            {"certified", s.certified},
            {"l", zx_graph_json(s.leg_l.dst)},
            {"k", zx_graph_json(s.leg_l.src)},
            {"r", zx_graph_json(s.leg_r.dst)},
            {"leg_l", components_json(s.leg_l)},
            {"leg_r", components_json(s.leg_r)}};
}

inline RuleSchema rule_schema_from_json(const json& j) {
    auto l = zx_graph_from_json(field(j, "l")), k = zx_graph_from_json(field(j, "k")),
         r = zx_graph_from_json(field(j, "r"));
    RuleSchema s{get_as<std::string>(field(j, "name"), "name"), rule_kind_from_json(field(j, "kind")),
                 morphism_with(k, l, field(j, "leg_l")), morphism_with(k, r, field(j, "leg_r")),
                 j.contains("certified") ? get_as<bool>(j["certified"], "certified") : false};
    auto v = validate_rule_schema(s);
    if (!v.empty()) throw Error("ValidationError", v.front().detail);
    return s;
}

inline ZXPack rule_pack_from_json(const json& j) {
    if (!j.is_array()) parse_fail("a rule pack is a JSON array");
    ZXPack pack{{}, false, 8};
    for (const auto& s : j) pack.schemas.push_back(rule_schema_from_json(s));
    return pack;
}

inline json to_json(const ZXPack& pack) {
    json out = json::array();
    for (const auto& s : pack.schemas) out.push_back(to_json(s));
    return out;
}

inline ZXPack load_rule_pack(const std::string& path) { return rule_pack_from_json(read_json_file(path)); }

// Builtin pack plus every *.json pack in the directory, in name order.
inline ZXPack load_pack_dir(const std::string& dir) {
    ZXPack pack = builtin_pack();
    std::vector<std::string> files;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.path().extension() == ".json") files.push_back(e.path().string());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) pack = merge_packs(pack, load_rule_pack(f));
    return pack;
}

// ---- files of unknown kind ----

enum class DocKind { schema, presheaf, morphism, cospan, zx_diagram, rule, grammar, derivation, open_derivation, square, rule_pack };

inline const char* to_string(DocKind k) {
    switch (k) {
    case DocKind::schema: return "schema";
    case DocKind::presheaf: return "presheaf";
    case DocKind::morphism: return "morphism";
    case DocKind::cospan: return "cospan";
    case DocKind::zx_diagram: return "zx_diagram";
    case DocKind::rule: return "rule";
    case DocKind::grammar: return "grammar";
    case DocKind::derivation: return "derivation";
    case DocKind::open_derivation: return "open_derivation";
    case DocKind::square: return "square";
    case DocKind::rule_pack: return "rule_pack";
    }
    return "";
}

inline DocKind detect_kind(const json& j) {
    if (j.is_array()) return DocKind::rule_pack;
    if (!j.is_object()) parse_fail("expected a JSON object or array");
    if (j.contains("steps")) return j.contains("grammar") ? DocKind::open_derivation : DocKind::derivation;
    if (j.contains("rows")) return DocKind::square;
    if (j.contains("rules")) return DocKind::grammar;
    if (j.contains("leg_l")) return DocKind::rule;
    if (j.contains("left_foot")) return j.contains("types") ? DocKind::zx_diagram : DocKind::cospan;
    if (j.contains("components")) return DocKind::morphism;
    if (j.contains("carriers")) return DocKind::presheaf;
    if (j.contains("sorts")) return DocKind::schema;
    parse_fail("cannot tell what kind of document this is");
}

struct ValidationReport {
    DocKind kind;
    bool ok = true;
    std::string detail;
};

// Parses and checks a document of any kind; derivations are re-verified.
// Closed derivations need a grammar.
inline ValidationReport validate_document(const json& j, const Grammar* grammar = nullptr) {
    ValidationReport rep{detect_kind(j), true, {}};
    switch (rep.kind) {
    case DocKind::schema: schema_from_json(j); break;
    case DocKind::presheaf: presheaf_from_json(j); break;
    case DocKind::morphism: morphism_from_json(j); break;
    case DocKind::cospan: cospan_from_json(j); break;
    case DocKind::zx_diagram: zx_from_json(j); break;
    case DocKind::rule: rule_from_json(j); break;
    case DocKind::grammar: grammar_from_json(j); break;
    case DocKind::square: square_from_json(j); break;
    case DocKind::rule_pack: rule_pack_from_json(j); break;
    case DocKind::derivation: {
        if (!grammar) throw Error("InputError", "validating a closed derivation needs its grammar");
        rep.ok = verify_derivation(*grammar, derivation_from_json(j, *grammar));
        if (!rep.ok) rep.detail = "derivation does not re-verify";
        break;
    }
    case DocKind::open_derivation: {
        auto [gr, d] = open_derivation_from_json(j);
        rep.ok = verify_open_derivation(gr, d);
        if (!rep.ok) rep.detail = "derivation does not re-verify";
        break;
    }
    }
    return rep;
}

} // namespace opensys
