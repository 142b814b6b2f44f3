#include <gtest/gtest.h>

#include <opensys/json_io.hpp>

#include <opensys/laws/suites.hpp>

#include <cstdlib>
#include <filesystem>

using namespace opensys;

namespace {

Presheaf two_loop_host() { return make_graph(4, {{1, 1}, {2, 2}, {0, 2}, {1, 2}, {2, 3}}); }
Presheaf two_loop_host_loopless() { return make_graph(4, {{0, 2}, {1, 2}, {2, 3}}); }

template <class F>
std::string error_code(F f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return "";
}

std::filesystem::path temp_dir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("opensys_io_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

} // namespace

TEST(Json, SchemaRoundTrip) {
    EXPECT_EQ(schema_ref_json(graph_interface()->schema()).get<std::string>(), "GRAPH");
    auto custom = make_schema("arrows", {"a", "b", "c"}, {{"f", "a", "b"}, {"g", "b", "c"}, {"gf", "a", "c"}},
                              {{"f", "g", "gf"}});
    auto back = schema_from_json(schema_ref_json(custom));
    EXPECT_EQ(*back, *custom);
    EXPECT_EQ(*schema_from_json(json("GRAPH")), *graph_interface()->schema());
    EXPECT_EQ(error_code([] { schema_from_json(json("NOPE")); }), "ParseError");
}

TEST(Json, PresheafRoundTripRandom) {
    std::mt19937 rng(3);
    for (int i = 0; i < 100; ++i) {
        auto g = oracle::random_graph(rng, 5, 6);
        if (i % 2) {
            std::vector<std::string> l;
            for (int v = 0; v < node_count(g); ++v) l.push_back(v % 2 ? "x" : "y");
            g = relabel(g, {{}, l});
        }
        auto j = to_json(g);
        EXPECT_EQ(presheaf_from_json(j), g);
        EXPECT_EQ(to_json(presheaf_from_json(json::parse(j.dump()))), j);
    }
}

TEST(Json, CanonicalOutputIsSortedAndCompact) {
    auto s = canonical_dump(to_json(make_graph(2, {{0, 1}})));
    EXPECT_EQ(s, R"({"action":{"s":[0],"t":[1]},"carriers":{"e":1,"n":2},"schema":"GRAPH"})");
}

TEST(Json, PresheafErrors) {
    EXPECT_EQ(error_code([] { presheaf_from_json(json::parse(R"({"schema":"GRAPH"})")); }), "ParseError");
    EXPECT_EQ(error_code([] {
                  presheaf_from_json(json::parse(R"({"schema":"GRAPH","carriers":{"n":1,"e":1},"action":{"s":[0]}})"));
              }),
              "ValidationError");
    EXPECT_NE(error_code([] {
                  presheaf_from_json(
                      json::parse(R"({"schema":"GRAPH","carriers":{"n":1,"e":1},"action":{"s":[0],"t":[5]}})"));
              }),
              "");
    EXPECT_EQ(error_code([] { presheaf_from_json(json::parse(R"({"schema":"GRAPH","carriers":{"q":1}})")); }),
              "ParseError");
}

TEST(Json, MorphismRoundTripAndRejection) {
    auto a = make_graph(1, {{0, 0}}), b = two_loop_host();
    for (const auto& m : hom_enumerate(a, b, false)) EXPECT_EQ(morphism_from_json(to_json(m)), m);
    json bad = to_json(hom_enumerate(a, b, false).front());
    bad["components"]["n"] = {0};
    EXPECT_EQ(error_code([&] { morphism_from_json(bad); }), "ValidationError");
}

TEST(Json, CospanRoundTripRandom) {
    std::mt19937 rng(4);
    auto I = graph_interface();
    for (int i = 0; i < 100; ++i) {
        auto c = random_open_graph(rng, I, i % 3, (i / 3) % 3, 4, 4);
        EXPECT_EQ(cospan_from_json(to_json(c)), c);
    }
    json j = to_json(identity_cospan(I, 2));
    j["left_leg"] = {0, 7};
    EXPECT_EQ(error_code([&] { cospan_from_json(j); }), "ValidationError");
}

TEST(Json, InterfaceIsOptional) {
    json j = to_json(identity_cospan(graph_interface(), 1));
    j.erase("interface");
    auto c = cospan_from_json(j);
    EXPECT_EQ(c.iface->sort_name(), "n");
}

TEST(Json, ZXDiagramRoundTrip) {
    for (auto c : {zx_generator("green", 2, 1, Phase::of(1, 4)), zx_generator("cup", 2, 0), zx_generator("braid", 2, 2),
                   compose(zx_generator("red", 1, 1, Phase::of(1, 2)), zx_generator("hadamard", 1, 1))}) {
        auto j = zx_to_json(c);
        EXPECT_TRUE(j.contains("types"));
        EXPECT_FALSE(j.contains("interface"));
        auto back = zx_from_json(j);
        EXPECT_EQ(back, c);
        EXPECT_EQ(detect_kind(j), DocKind::zx_diagram);
    }
    auto j = zx_to_json(zx_generator("green", 1, 1, Phase::of(1, 3)));
    EXPECT_EQ(j["types"]["2"], json({{"green", "1/3"}}));
}

TEST(Json, ZXTypingErrors) {
    auto j = zx_to_json(zx_generator("green", 1, 1));
    j["types"]["0"] = {{"red", "0"}};
    EXPECT_EQ(error_code([&] { zx_from_json(j); }), "ValidationError");
    j = zx_to_json(zx_generator("green", 1, 1));
    j["types"]["2"] = {{"green", "1/0"}};
    EXPECT_NE(error_code([&] { zx_from_json(j); }), "");
    j = zx_to_json(zx_generator("green", 1, 1));
    j["types"]["9"] = "white";
    EXPECT_EQ(error_code([&] { zx_from_json(j); }), "ValidationError");
}

TEST(Json, RuleAndGrammarRoundTrip) {
    for (const auto& gr : {loop_grammar(), edge_grammar(), context_grammar()}) {
        auto j = to_json(gr);
        auto back = grammar_from_json(json::parse(j.dump()));
        ASSERT_EQ(back.rules.size(), gr.rules.size());
        for (std::size_t i = 0; i < gr.rules.size(); ++i) {
            EXPECT_EQ(back.rules[i].name, gr.rules[i].name);
            EXPECT_EQ(back.rules[i].kind, gr.rules[i].kind);
            EXPECT_EQ(rule_key(back.rules[i]), rule_key(gr.rules[i]));
        }
        EXPECT_EQ(back.monic_matches, gr.monic_matches);
        EXPECT_EQ(to_json(back), j);
    }
}

TEST(Json, RuleRejections) {
    json j = to_json(loop_rule());
    j["kind"] = "medium";
    EXPECT_EQ(error_code([&] { rule_from_json(j); }), "ParseError");
    j = to_json(loop_rule());
    j["leg_l"]["n"] = {0, 0};
    EXPECT_EQ(error_code([&] { rule_from_json(j); }), "ValidationError");
    json g = to_json(loop_grammar());
    g["rules"].push_back(g["rules"][0]);
    EXPECT_EQ(error_code([&] { grammar_from_json(g); }), "ValidationError");
}

TEST(Json, DerivationRoundTripVerifies) {
    auto gr = loop_grammar();
    auto d = derivation_search(gr, two_loop_host(), two_loop_host_loopless(), {2, 1000});
    ASSERT_TRUE(d);
    auto back = derivation_from_json(json::parse(to_json(*d).dump()), gr);
    EXPECT_TRUE(verify_derivation(gr, back));
    EXPECT_EQ(back.steps.size(), 2u);
    EXPECT_EQ(back.end(), d->end());
    EXPECT_TRUE(validate_document(to_json(*d), &gr).ok);
    EXPECT_EQ(error_code([&] { validate_document(to_json(*d)); }), "InputError");
}

TEST(Json, TamperedDerivationFailsVerification) {
    auto gr = loop_grammar();
    auto d = *derivation_search(gr, two_loop_host(), two_loop_host_loopless(), {2, 1000});
    json j = to_json(d);
    // claim the second step leaves the remaining loop in place
    j["steps"][1]["h"] = j["steps"][1]["d"];
    j["steps"][1]["h"]["carriers"]["e"] = 4;
    j["steps"][1]["h"]["action"]["s"].push_back(2);
    j["steps"][1]["h"]["action"]["t"].push_back(2);
    auto rep = [&] {
        try {
            return validate_document(j, &gr);
        } catch (const Error& e) {
            return ValidationReport{DocKind::derivation, false, e.what()};
        }
    }();
    EXPECT_FALSE(rep.ok);
}

TEST(Json, OpenDerivationIsSelfContained) {
    auto gr = loop_grammar();
    auto I = gr.iface;
    Cospan start{I, 1, 1, two_loop_host(), {0}, {3}};
    Cospan goal{I, 1, 1, two_loop_host_loopless(), {0}, {3}};
    auto d = open_derivation_search(gr, start, goal, {2, 1000});
    ASSERT_TRUE(d);
    json j = to_json(*d, gr);
    EXPECT_EQ(detect_kind(j), DocKind::open_derivation);
    auto [g2, d2] = open_derivation_from_json(json::parse(j.dump()));
    EXPECT_TRUE(verify_open_derivation(g2, d2));
    EXPECT_EQ(d2.end(), d->end());
    EXPECT_TRUE(validate_document(j).ok);
}

TEST(Json, SquareRoundTrip) {
    auto gr = loop_grammar();
    auto s = *square_search(gr, two_loop_host(), two_loop_host_loopless());
    auto j = to_json(s);
    EXPECT_TRUE(j["fine"].get<bool>());
    EXPECT_EQ(square_from_json(json::parse(j.dump())), s);
    auto bold = lift_grammar(edge_grammar())[0];
    auto jb = to_json(bold);
    EXPECT_FALSE(jb["fine"].get<bool>());
    EXPECT_EQ(square_from_json(jb), bold);
    jb["fine"] = true;
    EXPECT_EQ(error_code([&] { square_from_json(jb); }), "ValidationError");
}

TEST(Json, CutRoundTrip) {
    const auto& schema = *graph_interface()->schema();
    Cut cut{{2}, {{0, 1, 0, 0, 1}, {0, 0, -1, 1}}};
    auto back = cut_from_json(to_json(cut, schema), schema);
    EXPECT_EQ(back.points, cut.points);
    EXPECT_EQ(back.side, cut.side);
}

TEST(Json, LiftedGrammarCarriesGenerators) {
    auto j = lifted_grammar_json(context_grammar());
    ASSERT_EQ(j["generators"].size(), 2u);
    for (const auto& s : j["generators"]) EXPECT_NO_THROW(square_from_json(s));
}

TEST(Json, BuiltinPackRoundTrip) {
    auto pack = builtin_pack();
    auto back = rule_pack_from_json(json::parse(to_json(pack).dump()));
    ASSERT_EQ(back.schemas.size(), pack.schemas.size());
    for (std::size_t i = 0; i < pack.schemas.size(); ++i) {
        EXPECT_EQ(back.schemas[i].name, pack.schemas[i].name);
        EXPECT_EQ(span_key(back.schemas[i].leg_l, back.schemas[i].leg_r),
                  span_key(pack.schemas[i].leg_l, pack.schemas[i].leg_r));
    }
    auto fuse = spider_fuse_schema(ZXKind::red, 1, 1, 1, 1);
    auto fj = to_json(ZXPack{{fuse}, false, 8});
    EXPECT_EQ(fj.at(0).at("r").at("types").at("2"), json({{"red", "$a+$b"}}));
    EXPECT_EQ(rule_pack_from_json(fj).schemas[0].variables(), fuse.variables());
}

TEST(Json, PackRejectsUnboundPhaseVariable) {
    auto fj = to_json(ZXPack{{trivial_spider_schema(ZXKind::green)}, false, 8});
    fj[0]["r"]["types"]["0"] = {{"green", "$z"}};
    EXPECT_NE(error_code([&] { rule_pack_from_json(fj); }), "");
}

TEST(Json, PackDirectoryLoads) {
    auto dir = temp_dir("packs");
    {
        std::ofstream(dir / "extra.json") << to_json(ZXPack{{trivial_spider_schema(ZXKind::red)}, false, 8}).dump();
        std::ofstream(dir / "notes.txt") << "ignored";
    }
    auto pack = load_pack_dir(dir.string());
    EXPECT_EQ(pack.schemas.size(), builtin_pack().schemas.size() + 1);
    EXPECT_TRUE(pack.spider_fusion);
    EXPECT_EQ(error_code([&] { load_rule_pack((dir / "missing.json").string()); }), "IOError");
    {
        std::ofstream(dir / "broken.json") << "[{";
    }
    EXPECT_EQ(error_code([&] { load_pack_dir(dir.string()); }), "ParseError");
    std::filesystem::remove_all(dir);
}

TEST(Json, DetectKind) {
    auto gr = loop_grammar();
    EXPECT_EQ(detect_kind(to_json(two_loop_host())), DocKind::presheaf);
    EXPECT_EQ(detect_kind(to_json(identity_cospan(gr.iface, 1))), DocKind::cospan);
    EXPECT_EQ(detect_kind(to_json(loop_rule())), DocKind::rule);
    EXPECT_EQ(detect_kind(to_json(gr)), DocKind::grammar);
    EXPECT_EQ(detect_kind(to_json(identity(two_loop_host()))), DocKind::morphism);
    EXPECT_EQ(detect_kind(to_json(lift_grammar(gr)[0])), DocKind::square);
    EXPECT_EQ(detect_kind(json::array()), DocKind::rule_pack);
    EXPECT_EQ(detect_kind(to_json(*graph_interface()->schema())), DocKind::schema);
    EXPECT_EQ(error_code([] { detect_kind(json::object()); }), "ParseError");
    EXPECT_EQ(error_code([] { detect_kind(json(3)); }), "ParseError");
}
