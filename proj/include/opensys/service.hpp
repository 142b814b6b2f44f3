#pragma once

// Session service behind the workbench. Routing lives in Service::handle so
// it can be driven without a socket; serve() binds it to cpp-httplib.

#include "json_io.hpp"

#include <httplib.h>

#include <atomic>
#include <chrono>
#include <ctime>
#include <iomanip>
#include <memory>
#include <mutex>
#include <regex>
#include <shared_mutex>

namespace opensys {

inline constexpr const char* kApiVersion = "1";
inline constexpr const char* kVersionHeader = "X-Opensys-Api";

struct Reply {
    int status = 200;
    json body;
};

inline Reply error_reply(int status, const std::string& code, const std::string& detail) {
    return {status, {{"error", {{"code", code}, {"detail", detail}}}}};
}

// One rewriting session. The stack holds every applied step; undo pops it.
struct Session {
    std::string id;
    Grammar grammar;                  // fixed rules, or just the interface when zx is set
    std::optional<ZXPack> zx;         // rules instantiated per state
    Cospan start;
    Cospan current;
    std::vector<OpenStep> stack;
    std::vector<Rule> used;           // rule of each stack entry
    std::string created;
    mutable std::mutex mu;

    Session(std::string i, Grammar g, std::optional<ZXPack> z, Cospan s, std::string c)
        : id(std::move(i)), grammar(std::move(g)), zx(std::move(z)), start(s), current(s), created(std::move(c)) {}

    Grammar rules_now() const { return zx ? zx_grammar_for(*zx, current.apex) : grammar; }

    struct Match {
        std::string rule;
        int index;
        Morphism match;
    };

    // Matches of every rule on the current state, indexed per rule.
    std::vector<Match> matches(const Grammar& gr) const {
        std::vector<Match> out;
        for (const auto& r : gr.rules) {
            int i = 0;
            for (auto& m : find_open_matches(r, current, gr.monic_matches)) out.push_back({r.name, i++, std::move(m)});
        }
        return out;
    }

    OpenDerivation derivation() const { return OpenDerivation{start, stack}; }

    Grammar trace_grammar() const {
        if (!zx) return grammar;
        Grammar g{grammar.iface, {}, true};
        std::set<std::string> names;
        for (const auto& r : used)
            if (names.insert(r.name).second) g.rules.push_back(r);
        return g;
    }

    json state_json() const {
        return {{"id", id},
                {"state", to_json(current)},
                {"key", cospan_key(current)},
                {"depth", stack.size()},
                {"created", created}};
    }
};

inline std::string utc_now() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

class Service {
public:
    explicit Service(ZXPack pack = builtin_pack()) : pack_(std::move(pack)) {}

    Reply handle(const std::string& method, const std::string& path, const std::string& body) const {
        try {
            return route(method, path, body);
        } catch (const json::exception& e) {
            return error_reply(422, "ParseError", e.what());
        } catch (const Error& e) {
            return error_reply(422, e.code(), e.detail());
        }
    }

    std::size_t session_count() const {
        std::shared_lock lock(store_mu_);
        return sessions_.size();
    }

private:
    ZXPack pack_;
    mutable std::shared_mutex store_mu_;
    mutable std::map<std::string, std::shared_ptr<Session>> sessions_;
    mutable std::atomic<int> next_id_{1};

    std::shared_ptr<Session> find(const std::string& id) const {
        std::shared_lock lock(store_mu_);
        auto it = sessions_.find(id);
        return it == sessions_.end() ? nullptr : it->second;
    }

    Reply route(const std::string& method, const std::string& path, const std::string& body) const {
        static const std::regex session_re(R"(/sessions/([A-Za-z0-9_-]+)(/(matches|apply|undo|trace))?)");
        std::smatch m;
        if (path == "/health" && method == "GET") return {200, {{"ok", true}, {"api", kApiVersion}}};
        if (path == "/sessions" && method == "POST") return create(body);
        if ((path == "/eval/compose" || path == "/eval/tensor") && method == "POST")
            return eval(path == "/eval/compose", body);
        if (!std::regex_match(path, m, session_re)) return error_reply(404, "NotFound", path);
        auto s = find(m[1]);
        if (!s) return error_reply(404, "UnknownSession", m[1]);
        const std::string sub = m[3];
        std::lock_guard lock(s->mu);
        if (sub.empty() && method == "GET") return {200, s->state_json()};
        if (sub == "matches" && method == "GET") return matches(*s);
        if (sub == "apply" && method == "POST") return apply(*s, body);
        if (sub == "undo" && method == "POST") return undo(*s);
        if (sub == "trace" && method == "GET") return {200, to_json(s->derivation(), s->trace_grammar())};
        return error_reply(405, "MethodNotAllowed", method + " " + path);
    }

    static bool typed(const json& j) { return j.is_object() && j.contains("types"); }

    static Cospan parse_state(const json& j, const InterfaceRef& I, bool zx) {
        if (zx) return zx_from_json(j);
        if (j.contains("left_foot")) return cospan_from_json(j, I);
        Presheaf x = presheaf_from_json(j);
        I->require_schema(x);
        return closed_cospan(I, x);
    }

    Reply create(const std::string& body) const {
        json req = json::parse(body);
        const json& g = field(req, "grammar");
        std::optional<ZXPack> zx;
        Grammar gr;
        if (g.is_string()) {
            if (g.get<std::string>() != "zx") return error_reply(422, "ValidationError", "unknown grammar name");
            zx = pack_;
            gr = Grammar{zx_interface(), {}, true};
        } else {
            gr = grammar_from_json(g);
        }
        Cospan start = parse_state(field(req, "start"), gr.iface, zx.has_value());
        auto id = "s" + std::to_string(next_id_++);
        auto s = std::make_shared<Session>(id, std::move(gr), std::move(zx), start, utc_now());
        {
            std::unique_lock lock(store_mu_);
            sessions_.emplace(id, s);
        }
        std::lock_guard lock(s->mu);
        return {201, s->state_json()};
    }

    static Reply matches(const Session& s) {
        const Grammar gr = s.rules_now();
        json out = json::array();
        for (const auto& m : s.matches(gr)) {
            auto st = apply_open(gr.rule(m.rule), m.match, s.current);
            out.push_back({{"rule", m.rule},
                           {"match_index", m.index},
                           {"match", components_json(m.match)},
                           {"preview_key", cospan_key(st.after)}});
        }
        return {200, out};
    }

    static Reply apply(Session& s, const std::string& body) {
        json req = json::parse(body);
        const auto rule = get_as<std::string>(field(req, "rule"), "rule");
        const auto index = get_as<int>(field(req, "match_index"), "match_index");
        if (req.contains("key") && get_as<std::string>(req["key"], "key") != cospan_key(s.current))
            return error_reply(409, "StaleState", "the session moved on since that key");
        const Grammar gr = s.rules_now();
        const Rule* r = nullptr;
        for (const auto& x : gr.rules)
            if (x.name == rule) r = &x;
        if (!r) return error_reply(409, "StaleMatch", "no rule " + rule + " applies to the current state");
        auto ms = find_open_matches(*r, s.current, gr.monic_matches);
        if (index < 0 || index >= static_cast<int>(ms.size()))
            return error_reply(409, "StaleMatch", "match index " + std::to_string(index) + " is out of range");
        OpenStep st = apply_open(*r, ms[index], s.current);
        if (!verify_step(*r, st.step) || !validate_cospan(st.after).empty())
            return error_reply(422, "VerificationFailed", "the step did not re-verify");
        if (s.zx) {
            auto v = validate_zx(st.after);
            if (!v.empty()) return error_reply(422, "GammaViolation", v.front().detail);
        }
        s.stack.push_back(st);
        s.used.push_back(*r);
        s.current = st.after;
        if (!verify_open_derivation(s.trace_grammar(), s.derivation())) {
            s.stack.pop_back();
            s.used.pop_back();
            s.current = s.stack.empty() ? s.start : s.stack.back().after;
            return error_reply(422, "VerificationFailed", "the trace did not re-verify");
        }
        json out = s.state_json();
        out["step"] = to_json(st.step);
        return {200, out};
    }

    static Reply undo(Session& s) {
        if (s.stack.empty()) return error_reply(409, "NothingToUndo", "the session is at its start state");
        s.current = s.stack.back().before;
        s.stack.pop_back();
        s.used.pop_back();
        return {200, s.state_json()};
    }

    static Reply eval(bool composing, const std::string& body) {
        json req = json::parse(body);
        const json &a = field(req, "left"), &b = field(req, "right");
        const bool zx = typed(a) || typed(b);
        Cospan x = zx ? zx_from_json(a) : cospan_from_json(a);
        Cospan y = zx ? zx_from_json(b) : cospan_from_json(b, x.iface);
        Cospan c = composing ? compose(x, y) : tensor(x, y);
        return {200, {{"cospan", zx ? zx_to_json(c) : to_json(c)}, {"key", cospan_key(c)}}};
    }
};

// Binds the service to cpp-httplib. Blocks until stop() is called.
class HttpServer {
public:
    explicit HttpServer(const Service& svc) : svc_(svc) {
        auto handler = [this](const httplib::Request& req, httplib::Response& res) {
            Reply r;
            auto it = req.headers.find(kVersionHeader);
            if (it != req.headers.end() && it->second != kApiVersion)
                r = error_reply(400, "VersionMismatch", std::string("server speaks api ") + kApiVersion);
            else
                r = svc_.handle(req.method, req.path, req.body);
            res.status = r.status;
            res.set_content(canonical_dump(r.body), "application/json");
        };
        server_.Get(".*", handler);
        server_.Post(".*", handler);
        server_.set_default_headers({{kVersionHeader, kApiVersion}});
    }

    int bind_any(const std::string& host) { return server_.bind_to_any_port(host); }
    bool bind(const std::string& host, int port) { return server_.bind_to_port(host, port); }
    bool listen_after_bind() { return server_.listen_after_bind(); }
    void stop() { server_.stop(); }
    void wait_until_ready() { server_.wait_until_ready(); }

private:
    const Service& svc_;
    httplib::Server server_;
};

// ZX_PACK_DIR extends the builtin pack when set.
inline ZXPack pack_from_env() {
    const char* dir = std::getenv("ZX_PACK_DIR");
    return dir && *dir ? load_pack_dir(dir) : builtin_pack();
}

} // namespace opensys
