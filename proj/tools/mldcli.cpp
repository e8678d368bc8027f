#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <mldkit/discrepancy.hpp>
#include <mldkit/dual_graph.hpp>
#include <mldkit/errors.hpp>
#include <mldkit/germ_io.hpp>
#include <mldkit/mld_engine.hpp>
#include <mldkit/rational.hpp>
#include <mldkit/smooth_germ.hpp>
#include <mldkit/theorem_lab.hpp>

namespace {

using namespace mldkit;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error(errc::parse_error, "cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void print_kv(const Json& j, const std::string& format) {
    if (format == "json") {
        std::cout << j.dump(2) << "\n";
        return;
    }
    if (format == "csv") {
        std::cout << "key,value\n";
        for (auto it = j.begin(); it != j.end(); ++it) {
            std::string v = it.value().is_string() ? it.value().get<std::string>()
                                                   : it.value().dump();
            std::cout << csv_escape(it.key()) << "," << csv_escape(v) << "\n";
        }
        return;
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        std::string v =
            it.value().is_string() ? it.value().get<std::string>() : it.value().dump();
        std::cout << it.key() << " = " << v << "\n";
    }
}

void print_report(const VerificationReport& rep, const std::string& format) {
    if (format == "json") std::cout << report_json(rep).dump(2) << "\n";
    else if (format == "csv") std::cout << report_csv(rep);
    else std::cout << report_text(rep);
}

Json witness_json(const MldResult& r) {
    return Json{{"value", rat_str(r.value)},
                {"depth", r.depth},
                {"witness_a0", rat_str(r.witness_a0)},
                {"certified", r.certified},
                {"witness", r.witness}};
}

std::vector<Rat> parse_coeff_list(const std::string& text) {
    std::vector<Rat> out;
    std::string cur;
    std::istringstream ss(text);
    while (std::getline(ss, cur, ',')) out.push_back(parse_rat(cur));
    if (out.empty()) throw error(errc::parse_error, "empty coefficient list");
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact log-discrepancy computations on dual graphs of surface germs"};
    app.require_subcommand(1);

    std::string format = "json";
    app.add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"json", "csv", "text"}))
        ->capture_default_str();

    std::string file;
    auto* pld_cmd = app.add_subcommand("pld", "Partial log discrepancy of a germ file");
    pld_cmd->add_option("file", file, "Germ file")->required();

    auto* mld_cmd = app.add_subcommand("mld", "Minimal log discrepancy of a germ file");
    mld_cmd->add_option("file", file, "Germ file")->required();

    int depth_flag = -1;
    auto* wit_cmd = app.add_subcommand("witnesses", "Divisors attaining the mld");
    wit_cmd->add_option("file", file, "Germ file")->required();
    wit_cmd->add_option("--depth", depth_flag, "Exploration depth bound");

    std::string suite;
    long trials = 1000;
    std::uint64_t seed = 0;
    int depth_max = 12, length_max = 4, weight_max = 4, kmax = 6;
    std::string grid_text;
    auto* verify_cmd = app.add_subcommand("verify", "Run a verification suite");
    verify_cmd->add_option("suite", suite, "Suite name")
        ->required()
        ->check(CLI::IsMember({"tower-identity", "weight", "fib-bound", "mld-bounds", "pld-acc"}));
    verify_cmd->add_option("--trials", trials, "Number of random cases");
    verify_cmd->add_option("--seed", seed, "RNG seed (stream is fully determined by it)");
    verify_cmd->add_option("--depth", depth_max, "Maximum tower depth");
    verify_cmd->add_option("--length", length_max, "Maximum graph length");
    verify_cmd->add_option("--weight", weight_max, "Maximum vertex weight");
    verify_cmd->add_option("--kmax", kmax, "Maximum contact parameter");
    verify_cmd->add_option("--coeffs", grid_text, "Coefficient grid, e.g. 1/2,1/3");

    std::string example_name;
    int k_param = 2;
    auto* ex_cmd = app.add_subcommand("example", "Run a named example family");
    ex_cmd->add_option("name", example_name, "Family name")
        ->required()
        ->check(CLI::IsMember({"tangent-pair", "unit-sum", "duval-d", "a2-branches",
                               "steep-chain"}));
    ex_cmd->add_option("--k", k_param, "Family parameter");

    std::string gamma_text, coeffs_text;
    auto* const_cmd = app.add_subcommand("constants", "Effective constants for a coefficient set");
    const_cmd->add_option("--gamma", gamma_text, "Gamma as p/q");
    const_cmd->add_option("--coeffs", coeffs_text, "Finite coefficient set, e.g. 1/2,1/3");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*pld_cmd) {
            GermFile gf = parse_germ(read_file(file));
            Json out;
            if (gf.kind == GermFile::Kind::smooth) {
                out["pld"] = "infinity";
            } else {
                auto p = pld(gf.singular.graph, incidence_from_file(gf));
                out["pld"] = p ? rat_str(*p) : "infinity";
            }
            print_kv(out, format);
            return 0;
        }
        if (*mld_cmd) {
            GermFile gf = parse_germ(read_file(file));
            MldResult r = gf.kind == GermFile::Kind::smooth ? mld_smooth(gf.smooth)
                                                            : mld_singular(gf.singular);
            print_kv(witness_json(r), format);
            return 0;
        }
        if (*wit_cmd) {
            GermFile gf = parse_germ(read_file(file));
            WitnessSet ws;
            if (gf.kind == GermFile::Kind::smooth) {
                int bound = depth_flag > 0 ? depth_flag : [&] {
                    std::vector<Rat> cs;
                    for (const Branch& b : gf.smooth.branches) cs.push_back(b.coefficient);
                    return default_depth_bound(cs);
                }();
                ws = witness_set(gf.smooth, bound);
            } else {
                int bound = depth_flag >= 0 ? depth_flag : [&] {
                    std::vector<Rat> cs;
                    for (const Attachment& a : gf.singular.attachments)
                        cs.push_back(a.coefficient);
                    return default_depth_bound(cs);
                }();
                ws = witness_set(gf.singular, bound);
            }
            Json out;
            out["mld"] = rat_str(ws.mld);
            out["count"] = ws.witnesses.size();
            out["truncated"] = ws.truncated;
            Json arr = Json::array();
            for (const MldResult& r : ws.witnesses) arr.push_back(witness_json(r));
            out["witnesses"] = std::move(arr);
            if (format == "json") std::cout << out.dump(2) << "\n";
            else print_kv(out, format);
            return 0;
        }
        if (*verify_cmd) {
            FamilySpec spec;
            spec.kind = suite;
            spec.trials = trials;
            spec.seed = seed;
            spec.depth_max = depth_max;
            spec.length_max = length_max;
            spec.weight_max = weight_max;
            spec.k_max = kmax;
            if (!grid_text.empty()) spec.grid = parse_coeff_list(grid_text);
            VerificationReport rep;
            if (suite == "tower-identity") rep = verify_tower_identity(spec);
            else if (suite == "weight") rep = verify_weight(spec);
            else if (suite == "fib-bound") rep = verify_fib_bound(spec);
            else if (suite == "mld-bounds") rep = verify_mld_bounds(spec);
            else rep = pld_scan(spec);
            print_report(rep, format);
            return rep.pass() ? 0 : 2;
        }
        if (*ex_cmd) {
            VerificationReport rep = run_example(example_name, k_param);
            print_report(rep, format);
            return rep.pass() ? 0 : 2;
        }
        if (*const_cmd) {
            GammaConstants gc;
            if (!coeffs_text.empty()) gc = constants_for(gamma_of_set(parse_coeff_list(coeffs_text), 1));
            else if (!gamma_text.empty()) gc = constants_for(parse_rat(gamma_text));
            else throw error(errc::out_of_range, "provide --gamma or --coeffs");
            Json out{{"gamma", rat_str(gc.gamma)},
                     {"n0", gc.n0.get_si()},
                     {"epsilon", rat_str(gc.epsilon)},
                     {"delta", rat_str(gc.delta)}};
            print_kv(out, format);
            return 0;
        }
    } catch (const error& e) {
        Json err{{"error", errc_name(e.code())}, {"detail", e.what()}};
        std::cerr << err.dump() << "\n";
        return e.code() == errc::parse_error ? 3 : 1;
    } catch (const std::exception& e) {
        Json err{{"error", "Internal"}, {"detail", e.what()}};
        std::cerr << err.dump() << "\n";
        return 1;
    }
    return 0;
}
