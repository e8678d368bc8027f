#include <catch2/catch_amalgamated.hpp>

#include <mldkit/germ_io.hpp>

using namespace mldkit;

namespace {

const char* kSmooth = R"({
  "kind": "smooth",
  "branches": [{"coeff": "1/2"}, {"coeff": "3/4"}],
  "contacts": [[0, 1, 3]]
})";

const char* kSingular = R"({
  "kind": "singular",
  "graph": {"weights": [2, 2], "edges": [[0, 1]]},
  "attachments": [{"coeff": "1/2", "host": 0}]
})";

} // namespace

TEST_CASE("parsing germ files") {
    GermFile s = parse_germ(kSmooth);
    REQUIRE(s.kind == GermFile::Kind::smooth);
    REQUIRE(s.smooth.branches.size() == 2);
    CHECK(s.smooth.branches[1].coefficient == rat(3, 4));
    CHECK(s.smooth.contacts.of(0, 1) == 3);
    CHECK(s.smooth.contacts.of(1, 0) == 3);

    GermFile g = parse_germ(kSingular);
    REQUIRE(g.kind == GermFile::Kind::singular);
    CHECK(g.singular.graph.size() == 2);
    REQUIRE(g.singular.attachments.size() == 1);
    CHECK(g.singular.attachments[0].host == VertexId{0});
}

TEST_CASE("parse errors carry the parse code") {
    auto code_of = [](const char* text) {
        try {
            parse_germ(text);
        } catch (const error& e) {
            return e.code();
        }
        return errc::out_of_range;
    };
    CHECK(code_of("{") == errc::parse_error);
    CHECK(code_of(R"({"kind": "other"})") == errc::parse_error);
    CHECK(code_of(R"({"kind": "smooth", "branches": [{"coeff": "0.5"}]})") == errc::parse_error);
    CHECK(code_of(R"({"kind": "smooth", "branches": [{"coeff": "1/2"}],
                     "contacts": [[0, 0, 2]]})") == errc::parse_error);
    CHECK(code_of(R"({"kind": "singular", "graph": {"weights": [2], "edges": []},
                     "attachments": [{"coeff": "1/2", "host": 3}]})") == errc::parse_error);
    CHECK(code_of(R"({"kind": "singular", "graph": {"weights": [2], "edges": []},
                     "incidence": {"0": "-1/2"}})") == errc::parse_error);
}

TEST_CASE("round-trip is byte-exact") {
    for (const char* text : {kSmooth, kSingular}) {
        GermFile gf = parse_germ(text);
        std::string once = serialize_germ(gf);
        GermFile back = parse_germ(once);
        std::string twice = serialize_germ(back);
        CHECK(once == twice);
    }
    // Incidence blocks survive the loop too.
    const char* with_incidence = R"({
      "kind": "singular",
      "graph": {"weights": [2, 2], "edges": [[0, 1]]},
      "incidence": {"0": "1/2", "1": "0"}
    })";
    GermFile gf = parse_germ(with_incidence);
    std::string once = serialize_germ(gf);
    CHECK(once == serialize_germ(parse_germ(once)));
}

TEST_CASE("incidence override feeds the solver") {
    const char* text = R"({
      "kind": "singular",
      "graph": {"weights": [2, 2], "edges": [[0, 1]]},
      "incidence": {"0": "1/2", "1": "0"}
    })";
    GermFile gf = parse_germ(text);
    BoundaryIncidence inc = incidence_from_file(gf);
    auto p = pld(gf.singular.graph, inc);
    REQUIRE(p.has_value());
    CHECK(*p == rat(2, 3));
}

TEST_CASE("attachments define the incidence when no override is given") {
    GermFile gf = parse_germ(kSingular);
    BoundaryIncidence inc = incidence_from_file(gf);
    CHECK(inc.beta_of(VertexId{0}) == rat(1, 2));
    CHECK(inc.beta_of(VertexId{1}) == 0);
}

TEST_CASE("report serialization shapes") {
    VerificationReport rep;
    rep.suite = "demo";
    rep.cases = 3;
    rep.stat("alpha", "1/2");
    rep.failures.push_back({"case-1", "detail, with comma"});
    Json j = report_json(rep);
    CHECK(j["suite"] == "demo");
    CHECK(j["pass"] == false);
    CHECK(j["failures"].size() == 1);
    std::string csv = report_csv(rep);
    CHECK(csv.find("summary,suite,demo") != std::string::npos);
    CHECK(csv.find("\"detail, with comma\"") != std::string::npos);
    std::string text = report_text(rep);
    CHECK(text.find("demo: FAIL") != std::string::npos);
}
