// opensys: command line front end. Canonical JSON on stdout, a one-line
// summary on stderr. Exit 0 success, 1 negative result, 2 input error.

#include <opensys/laws/criteria.hpp>
#include <opensys/service.hpp>

#include <CLI11.hpp>

#include <csignal>
#include <iostream>

using namespace opensys;

namespace {

void emit(const json& j) { std::cout << canonical_dump(j) << "\n"; }
void note(const std::string& s) { std::cerr << s << "\n"; }

bool is_zx(const json& j) { return j.is_object() && j.contains("types"); }

Cospan read_cospan(const json& j, const InterfaceRef& I = nullptr) {
    if (is_zx(j)) return zx_from_json(j);
    if (j.contains("left_foot")) return cospan_from_json(j, I);
    Presheaf x = presheaf_from_json(j);
    InterfaceRef iface = I ? I : default_interface(x.schema_ref());
    iface->require_schema(x);
    return closed_cospan(iface, x);
}

json write_cospan(const Cospan& c, bool zx) { return zx ? zx_to_json(c) : to_json(c); }

// Hosts given as plain presheaves come back as plain presheaves.
json write_state(const Cospan& c, const json& like) {
    if (is_zx(like)) return zx_to_json(c);
    return like.contains("left_foot") ? to_json(c) : to_json(c.apex);
}

OpenDerivation as_open(const InterfaceRef& I, const Derivation& d) {
    OpenDerivation out{closed_cospan(I, d.start), {}};
    for (const auto& st : d.steps) out.steps.push_back({st, closed_cospan(I, st.g()), closed_cospan(I, st.h())});
    return out;
}

int run_validate(const std::string& file, const std::string& grammar_file) {
    json j = read_json_file(file);
    std::optional<Grammar> gr;
    if (!grammar_file.empty()) gr = grammar_from_json(read_json_file(grammar_file));
    auto rep = validate_document(j, gr ? &*gr : nullptr);
    json out{{"kind", to_string(rep.kind)}, {"ok", rep.ok}};
    if (!rep.detail.empty()) out["detail"] = rep.detail;
    emit(out);
    note(std::string(to_string(rep.kind)) + (rep.ok ? ": valid" : ": " + rep.detail));
    return rep.ok ? 0 : 1;
}

int run_binary(bool composing, const std::string& f1, const std::string& f2) {
    json a = read_json_file(f1), b = read_json_file(f2);
    const bool zx = is_zx(a) || is_zx(b);
    Cospan x = read_cospan(a);
    Cospan y = read_cospan(b, zx ? nullptr : x.iface);
    Cospan c = composing ? compose(x, y) : tensor(x, y);
    emit(write_cospan(c, zx));
    note(std::string(composing ? "composite" : "tensor") + ": " + std::to_string(c.left) + " -> " +
         std::to_string(c.right) + ", apex " + std::to_string(node_count(c.apex)) + " nodes / " +
         std::to_string(edge_count(c.apex)) + " edges");
    return 0;
}

Grammar read_grammar(const std::string& file, bool force_monic) {
    Grammar gr = grammar_from_json(read_json_file(file));
    if (force_monic) gr.monic_matches = true;
    return gr;
}

int run_matches(const std::string& gfile, const std::string& hfile, bool monic) {
    Grammar gr = read_grammar(gfile, monic);
    Cospan x = read_cospan(read_json_file(hfile), gr.iface);
    json out = json::array();
    for (const auto& r : gr.rules) {
        int i = 0;
        for (const auto& m : find_open_matches(r, x, gr.monic_matches)) {
            auto st = apply_open(r, m, x);
            out.push_back({{"rule", r.name},
                           {"match_index", i++},
                           {"match", components_json(m)},
                           {"preview_key", cospan_key(st.after)}});
        }
    }
    emit(out);
    note(std::to_string(out.size()) + " matches");
    return out.empty() ? 1 : 0;
}

int run_apply(const std::string& gfile, const std::string& hfile, const std::string& rule, int index, bool monic) {
    Grammar gr = read_grammar(gfile, monic);
    json hj = read_json_file(hfile);
    Cospan x = read_cospan(hj, gr.iface);
    const Rule& r = gr.rule(rule);
    auto ms = find_open_matches(r, x, gr.monic_matches);
    if (index < 0 || index >= static_cast<int>(ms.size()))
        throw Error("InvalidMatch", "rule " + rule + " has " + std::to_string(ms.size()) + " matches");
    auto st = apply_open(r, ms[index], x);
    if (!verify_step(r, st.step)) throw Error("VerificationFailed", "the step did not re-verify");
    emit({{"result", write_state(st.after, hj)}, {"step", to_json(st.step)}, {"key", cospan_key(st.after)}});
    note("applied " + rule + " at match " + std::to_string(index));
    return 0;
}

int run_derive(const std::string& gfile, const std::string& from, const std::string& to, int depth, bool monic) {
    Grammar gr = read_grammar(gfile, monic);
    json a = read_json_file(from), b = read_json_file(to);
    const bool open = a.contains("left_foot") || b.contains("left_foot");
    std::optional<OpenDerivation> d;
    if (open) {
        d = open_derivation_search(gr, read_cospan(a, gr.iface), read_cospan(b, gr.iface), {depth, 1000000});
    } else {
        auto g = presheaf_from_json(a), h = presheaf_from_json(b);
        gr.iface->require_schema(g);
        if (auto cd = derivation_search(gr, g, h, {depth, 1000000})) d = as_open(gr.iface, *cd);
    }
    if (!d) {
        emit({{"found", false}, {"depth", depth}});
        note("no derivation within depth " + std::to_string(depth));
        return 1;
    }
    if (!verify_open_derivation(gr, *d)) throw Error("VerificationFailed", "derivation did not re-verify");
    emit(to_json(*d, gr));
    note("derivation of " + std::to_string(d->steps.size()) + " steps");
    return 0;
}

int run_check(const std::string& name) {
    using namespace suite;
    const std::map<std::string, std::vector<std::string>> aliases{
        {"pushout-oracle", {"universal-property-oracle"}},
        {"adhesive", {"adhesivity"}},
        {"frobenius", {"relational-structure"}},
        {"snake", {"compact-closure", "zx-snake"}},
        {"zx-snake", {"zx-snake"}},
        {"all", {}},
    };
    std::vector<std::string> wanted;
    if (auto it = aliases.find(name); it != aliases.end())
        wanted = it->second;
    else
        wanted = {name};
    std::vector<Criterion> pool = acceptance_criteria();
    pool.push_back({"zx-snake", zx_snake_check});
    json results = json::array();
    bool all_ok = true;
    for (const auto& c : pool) {
        const bool pick = name == "all" ? std::string(c.name) != "zx-snake"
                                        : std::find(wanted.begin(), wanted.end(), c.name) != wanted.end();
        if (!pick) continue;
        auto v = timed(c.run);
        all_ok = all_ok && v.ok;
        results.push_back({{"suite", c.name}, {"ok", v.ok}, {"detail", v.detail}, {"seconds", v.seconds}});
        note(std::string(v.ok ? "PASS " : "FAIL ") + c.name + ": " + v.detail);
    }
    if (results.empty()) throw Error("UnknownSuite", name);
    emit(results.size() == 1 ? results[0] : json{{"ok", all_ok}, {"results", results}});
    return all_ok ? 0 : 1;
}

int run_simplify(const std::string& file, const std::string& strategy, int budget) {
    Cospan d = zx_from_json(read_json_file(file));
    ZXStrategy s;
    if (strategy == "first-match")
        s = ZXStrategy::first_match;
    else if (strategy == "exhaustive-bfs")
        s = ZXStrategy::exhaustive_bfs;
    else
        throw Error("InputError", "strategy is first-match or exhaustive-bfs");
    auto res = zx_simplify(pack_from_env(), d, s, budget);
    if (!verify_zx_derivation(res)) throw Error("VerificationFailed", "simplification did not re-verify");
    emit({{"result", zx_to_json(res.end())}, {"derivation", to_json(res.derivation, res.rules)}});
    note("simplified in " + std::to_string(res.size()) + " steps: size " + std::to_string(zx_size(d)) + " -> " +
         std::to_string(zx_size(res.end())));
    return 0;
}

int run_decompose(const std::string& file, const std::string& cut_file) {
    json j = read_json_file(file);
    Cospan c = read_cospan(j);
    Cut cut = cut_from_json(read_json_file(cut_file), c.apex.schema());
    auto [l, r] = decompose_closed(c, cut);
    if (!cospan_isomorphic(compose(l, r), c)) throw Error("VerificationFailed", "halves do not recompose");
    const bool zx = is_zx(j);
    emit({{"left", write_cospan(l, zx)}, {"right", write_cospan(r, zx)}});
    note("split at " + std::to_string(cut.points.size()) + " points");
    return 0;
}

HttpServer* g_server = nullptr;

int run_serve(const std::string& bind, int port) {
    Service svc(pack_from_env());
    HttpServer server(svc);
    g_server = &server;
    std::signal(SIGINT, [](int) {
        if (g_server) g_server->stop();
    });
    std::signal(SIGTERM, [](int) {
        if (g_server) g_server->stop();
    });
    if (!server.bind(bind, port)) throw Error("IOError", "cannot bind " + bind + ":" + std::to_string(port));
    note("listening on " + bind + ":" + std::to_string(port) + " (api " + kApiVersion + ")");
    server.listen_after_bind();
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"opensys: structured cospans and double-pushout rewriting"};
    app.require_subcommand(1);
    std::function<int()> action;

    std::string f1, f2, f3, grammar_file, rule, cut_file, strategy = "exhaustive-bfs", bind = "127.0.0.1";
    int match = 0, depth = 3, budget = 8, port = 8080;
    bool monic = false;

    auto* validate = app.add_subcommand("validate", "Parse and check a file of any supported kind");
    validate->add_option("file", f1)->required();
    validate->add_option("--grammar", grammar_file, "Grammar for closed derivations");
    validate->callback([&] { action = [&] { return run_validate(f1, grammar_file); }; });

    for (const char* name : {"compose", "tensor"}) {
        auto* sub = app.add_subcommand(name, std::string(name) + " two cospans");
        sub->add_option("first", f1)->required();
        sub->add_option("second", f2)->required();
        const bool composing = std::string(name) == "compose";
        sub->callback([&, composing] { action = [&, composing] { return run_binary(composing, f1, f2); }; });
    }

    auto* matches = app.add_subcommand("matches", "List rule matches on a host");
    matches->add_option("grammar", f1)->required();
    matches->add_option("host", f2)->required();
    matches->add_flag("--monic", monic, "Only injective matches");
    matches->callback([&] { action = [&] { return run_matches(f1, f2, monic); }; });

    auto* apply = app.add_subcommand("apply", "Apply one rule at one match");
    apply->add_option("grammar", f1)->required();
    apply->add_option("host", f2)->required();
    apply->add_option("--rule", rule)->required();
    apply->add_option("--match", match)->required();
    apply->add_flag("--monic", monic, "Only injective matches");
    apply->callback([&] { action = [&] { return run_apply(f1, f2, rule, match, monic); }; });

    auto* derive = app.add_subcommand("derive", "Search for a derivation");
    derive->add_option("grammar", f1)->required();
    derive->add_option("from", f2)->required();
    derive->add_option("to", f3)->required();
    derive->add_option("--depth", depth)->check(CLI::NonNegativeNumber);
    derive->add_flag("--monic", monic, "Only injective matches");
    derive->callback([&] { action = [&] { return run_derive(f1, f2, f3, depth, monic); }; });

    auto* check = app.add_subcommand("check", "Run a law-check suite");
    check->add_option("suite", f1)->required();
    check->callback([&] { action = [&] { return run_check(f1); }; });

    auto* zx = app.add_subcommand("zx", "ZX diagram tools");
    zx->require_subcommand(1);
    auto* simplify = zx->add_subcommand("simplify", "Simplify a ZX diagram");
    simplify->add_option("diagram", f1)->required();
    simplify->add_option("--strategy", strategy)->check(CLI::IsMember({"first-match", "exhaustive-bfs"}));
    simplify->add_option("--budget", budget)->check(CLI::NonNegativeNumber);
    simplify->callback([&] { action = [&] { return run_simplify(f1, strategy, budget); }; });

    auto* decompose = app.add_subcommand("decompose", "Split a closed system along a cut");
    decompose->add_option("cospan", f1)->required();
    decompose->add_option("--cut", cut_file)->required();
    decompose->callback([&] { action = [&] { return run_decompose(f1, cut_file); }; });

    auto* serve = app.add_subcommand("serve", "Run the session HTTP service");
    serve->add_option("--port", port)->check(CLI::Range(0, 65535));
    serve->add_option("--bind", bind);
    serve->callback([&] { action = [&] { return run_serve(bind, port); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    try {
        return action();
    } catch (const Error& e) {
        emit({{"error", {{"code", e.code()}, {"detail", e.detail()}}}});
        note(e.code() + ": " + e.detail());
        return 2;
    } catch (const std::exception& e) {
        emit({{"error", {{"code", "InternalError"}, {"detail", e.what()}}}});
        note(e.what());
        return 2;
    }
}
