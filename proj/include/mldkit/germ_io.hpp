#pragma once

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "mld_engine.hpp"
#include "rational.hpp"
#include "smooth_germ.hpp"
#include "theorem_lab.hpp"

namespace mldkit {

using Json = nlohmann::ordered_json;

// Parsed germ file. Vertex indices in files are positional; the library's
// opaque ids coincide with positions for graphs built here.
struct GermFile {
    enum class Kind { smooth, singular } kind = Kind::smooth;
    SmoothGerm smooth;
    SingularGerm singular;
    // Optional direct beta override for the singular kind, keyed by vertex.
    std::optional<std::map<int, Rat>> incidence;
};

namespace detail {

inline const Json& require(const Json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw error(errc::parse_error, std::string("missing field '") + key + "'");
    return *it;
}

inline Rat rat_field(const Json& j) {
    if (j.is_string()) return parse_rat(j.get<std::string>());
    if (j.is_number_integer()) return rat(j.get<long>());
    throw error(errc::parse_error, "rationals must be \"p/q\" strings or integers");
}

inline ContactTable parse_contacts(const Json& j) {
    ContactTable t;
    for (const Json& row : j) {
        if (!row.is_array() || row.size() != 3)
            throw error(errc::parse_error, "contact rows are [i, j, c]");
        int i = row[0].get<int>(), jj = row[1].get<int>(), c = row[2].get<int>();
        if (i == jj) throw error(errc::parse_error, "contact connects a branch to itself");
        if (c < 1) throw error(errc::parse_error, "contact order must be >= 1");
        t.set(static_cast<BranchId>(i), static_cast<BranchId>(jj), c);
    }
    return t;
}

} // namespace detail

inline GermFile parse_germ(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw error(errc::parse_error, e.what());
    }
    GermFile gf;
    std::string kind = detail::require(j, "kind").get<std::string>();
    if (kind == "smooth") {
        gf.kind = GermFile::Kind::smooth;
        BranchId next = 0;
        for (const Json& b : detail::require(j, "branches"))
            gf.smooth.branches.push_back(Branch{next++, detail::rat_field(detail::require(b, "coeff"))});
        if (j.contains("contacts")) gf.smooth.contacts = detail::parse_contacts(j["contacts"]);
        BoundaryValidation val = validate_boundary(gf.smooth);
        if (!val.ok) throw error(errc::parse_error, val.detail);
    } else if (kind == "singular") {
        gf.kind = GermFile::Kind::singular;
        const Json& graph = detail::require(j, "graph");
        std::vector<int> weights;
        for (const Json& w : detail::require(graph, "weights")) weights.push_back(w.get<int>());
        std::vector<std::pair<int, int>> edges;
        for (const Json& e : detail::require(graph, "edges")) {
            if (!e.is_array() || e.size() != 2)
                throw error(errc::parse_error, "edges are [i, j] pairs");
            edges.emplace_back(e[0].get<int>(), e[1].get<int>());
        }
        gf.singular.graph = DualGraph::build(weights, edges);
        BranchId next = 0;
        if (j.contains("attachments")) {
            for (const Json& a : j["attachments"]) {
                int host = detail::require(a, "host").get<int>();
                if (host < 0 || host >= static_cast<int>(weights.size()))
                    throw error(errc::parse_error, "attachment host out of range");
                gf.singular.attachments.push_back(
                    Attachment{next++, detail::rat_field(detail::require(a, "coeff")),
                               VertexId{static_cast<std::uint32_t>(host)}});
            }
        }
        if (j.contains("contacts")) gf.singular.contacts = detail::parse_contacts(j["contacts"]);
        if (j.contains("incidence")) {
            std::map<int, Rat> inc;
            for (auto it = j["incidence"].begin(); it != j["incidence"].end(); ++it) {
                int v = std::stoi(it.key());
                if (v < 0 || v >= static_cast<int>(weights.size()))
                    throw error(errc::parse_error, "incidence vertex out of range");
                Rat b = detail::rat_field(it.value());
                if (b < 0) throw error(errc::parse_error, "incidence values must be >= 0");
                inc[v] = b;
            }
            gf.incidence = std::move(inc);
        }
        validate_singular(gf.singular);
    } else {
        throw error(errc::parse_error, "kind must be \"smooth\" or \"singular\"");
    }
    return gf;
}

inline std::string serialize_germ(const GermFile& gf) {
    Json j;
    if (gf.kind == GermFile::Kind::smooth) {
        j["kind"] = "smooth";
        Json branches = Json::array();
        for (const Branch& b : gf.smooth.branches)
            branches.push_back(Json{{"coeff", rat_str(b.coefficient)}});
        j["branches"] = std::move(branches);
        if (!gf.smooth.contacts.c.empty()) {
            Json contacts = Json::array();
            for (const auto& [key, c] : gf.smooth.contacts.c)
                contacts.push_back(Json::array({key.first, key.second, c}));
            j["contacts"] = std::move(contacts);
        }
    } else {
        j["kind"] = "singular";
        Json weights = Json::array(), edges = Json::array();
        for (VertexId v : gf.singular.graph.vertices()) weights.push_back(gf.singular.graph.weight(v));
        for (const auto& [key, mult] : gf.singular.graph.edges())
            for (int m = 0; m < mult; ++m)
                edges.push_back(Json::array({key.first.value, key.second.value}));
        j["graph"] = Json{{"weights", std::move(weights)}, {"edges", std::move(edges)}};
        if (!gf.singular.attachments.empty()) {
            Json atts = Json::array();
            for (const Attachment& a : gf.singular.attachments)
                atts.push_back(Json{{"coeff", rat_str(a.coefficient)}, {"host", a.host.value}});
            j["attachments"] = std::move(atts);
        }
        if (!gf.singular.contacts.c.empty()) {
            Json contacts = Json::array();
            for (const auto& [key, c] : gf.singular.contacts.c)
                contacts.push_back(Json::array({key.first, key.second, c}));
            j["contacts"] = std::move(contacts);
        }
        if (gf.incidence) {
            Json inc = Json::object();
            for (const auto& [v, b] : *gf.incidence) inc[std::to_string(v)] = rat_str(b);
            j["incidence"] = std::move(inc);
        }
    }
    return j.dump(2) + "\n";
}

inline BoundaryIncidence incidence_from_file(const GermFile& gf) {
    if (gf.kind != GermFile::Kind::singular)
        throw error(errc::parse_error, "incidence applies to singular germs");
    if (gf.incidence) {
        BoundaryIncidence inc;
        for (VertexId v : gf.singular.graph.vertices()) inc.beta[v] = Rat(0);
        for (const auto& [v, b] : *gf.incidence)
            inc.beta[VertexId{static_cast<std::uint32_t>(v)}] = b;
        for (const Attachment& a : gf.singular.attachments)
            inc.coefficient_set.push_back(a.coefficient);
        return inc;
    }
    return incidence_of(gf.singular);
}

inline Json report_json(const VerificationReport& rep) {
    Json j;
    j["suite"] = rep.suite;
    j["cases"] = rep.cases;
    j["pass"] = rep.pass();
    Json fails = Json::array();
    for (const CaseFailure& f : rep.failures)
        fails.push_back(Json{{"case", f.case_id}, {"detail", f.detail}});
    j["failures"] = std::move(fails);
    Json stats = Json::object();
    for (const auto& [k, v] : rep.stats) stats[k] = v;
    j["stats"] = std::move(stats);
    return j;
}

inline std::string csv_escape(const std::string& s) {
    bool needs = s.find_first_of(",\"\n") != std::string::npos;
    if (!needs) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

inline std::string report_csv(const VerificationReport& rep) {
    std::string out = "record,key,value\n";
    out += "summary,suite," + csv_escape(rep.suite) + "\n";
    out += "summary,cases," + std::to_string(rep.cases) + "\n";
    out += "summary,pass," + std::string(rep.pass() ? "true" : "false") + "\n";
    for (const auto& [k, v] : rep.stats)
        out += "stat," + csv_escape(k) + "," + csv_escape(v) + "\n";
    for (const CaseFailure& f : rep.failures)
        out += "failure," + csv_escape(f.case_id) + "," + csv_escape(f.detail) + "\n";
    return out;
}

inline std::string report_text(const VerificationReport& rep) {
    std::string out = rep.suite + ": " + (rep.pass() ? "PASS" : "FAIL") + " (" +
                      std::to_string(rep.cases) + " cases)\n";
    for (const auto& [k, v] : rep.stats) out += "  " + k + " = " + v + "\n";
    for (const CaseFailure& f : rep.failures)
        out += "  FAIL " + f.case_id + ": " + f.detail + "\n";
    return out;
}

} // namespace mldkit
