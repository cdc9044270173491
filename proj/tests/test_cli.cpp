#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "torusrel/cli.hpp"
#include "torusrel/config.hpp"
#include "torusrel/errors.hpp"

using namespace torusrel;

namespace {

struct CliResult {
    int rc;
    std::string out;
    std::string err;
};

CliResult run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int rc = run_cli(args, out, err);
    return {rc, out.str(), err.str()};
}

nlohmann::json out_json(const CliResult& r) { return nlohmann::json::parse(r.out); }

std::string tmp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path);
    REQUIRE(f.good());
    f << content;
}

const char* kRep1 = "data/rep_rank1.json";
const char* kRep2 = "data/rep_rank2.json";

} // namespace

TEST_CASE("bounds reports the pinned rank one chain") {
    auto r = run({"--rep", kRep1, "--D", "1", "bounds"});
    REQUIRE(r.rc == 0);
    auto j = out_json(r);
    CHECK(j["D"] == "1");
    CHECK(j["d0"] == 4);
    CHECK(j["n0"] == 928);
    CHECK(j["d1"] == 14848);
    CHECK(j["hilbert_A_size"] == 13);
    CHECK(j["hilbert_B_size"] == 1857);
}

TEST_CASE("bounds reports the pinned rank two chain") {
    auto r = run({"--rep", kRep2, "--D", "3/4", "bounds"});
    REQUIRE(r.rc == 0);
    auto j = out_json(r);
    CHECK(j["D"] == "3/4");
    CHECK(j["d0"] == 6);
    CHECK(j["n0"] == 88529281);
    CHECK(j["d1"] == 3187054116);
    CHECK(j["hilbert_A_size"] == 261);
    CHECK(j["hilbert_B_size"] == 0); // circuit scan skipped at this size
}

TEST_CASE("generators lists the two row variables") {
    auto r = run({"--rep", kRep1, "generators", "--n", "2", "--dcap", "2"});
    REQUIRE(r.rc == 0);
    auto j = out_json(r);
    std::vector<std::string> want = {"x|y", "y|x", "x*x|y*y", "x*y|x*y", "y*y|x*x"};
    REQUIRE(j.is_array());
    CHECK(j.get<std::vector<std::string>>() == want);
}

TEST_CASE("decompose writes a certificate that verify replays") {
    std::string cert = tmp_path("torusrel_cli_cert.json");
    auto r = run({"--rep", kRep1, "--D", "1", "--output", cert, "decompose",
                  "(x|y)(y|x) = (x*y|x*y)"});
    REQUIRE(r.rc == 0);
    auto summary = out_json(r);
    CHECK(summary["steps"] == 1);
    CHECK(summary["max_step_degree"] == 2);
    CHECK(summary["bound"] == 14848);
    CHECK(summary["certificate"] == cert);

    auto v = run({"--rep", kRep1, "verify", cert});
    CHECK(v.rc == 0);
    CHECK(out_json(v)["ok"] == true);
}

TEST_CASE("decompose without an output path prints the certificate") {
    auto r = run({"--rep", kRep1, "--D", "1", "decompose",
                  "(x*y|x*y) = (x*y|x*y)"});
    REQUIRE(r.rc == 0);
    auto doc = out_json(r);
    CHECK(doc.contains("target"));
    CHECK(doc["steps"].size() == 0);
    auto summary = nlohmann::json::parse(r.err);
    CHECK(summary["steps"] == 0);
}

TEST_CASE("verify flags a tampered certificate with exit code five") {
    std::string cert = tmp_path("torusrel_cli_tampered.json");
    auto r = run({"--rep", kRep1, "--D", "1", "--output", cert, "decompose",
                  "(x|y)(y|x) = (x*y|x*y)"});
    REQUIRE(r.rc == 0);

    std::ifstream in(cert);
    auto doc = nlohmann::json::parse(in);
    in.close();
    doc["bound"] = 1;
    write_file(cert, doc.dump(2));

    auto v = run({"verify", cert});
    CHECK(v.rc == 5);
    auto res = out_json(v);
    CHECK(res["ok"] == false);
    CHECK(res["diagnostic"] == "degree-bound-exceeded");
}

TEST_CASE("verify rejects unreadable and malformed files") {
    auto missing = run({"verify", tmp_path("torusrel_cli_nonexistent.json")});
    CHECK(missing.rc == 1);

    std::string garbled = tmp_path("torusrel_cli_garbled.json");
    write_file(garbled, "{not json");
    auto bad = run({"verify", garbled});
    CHECK(bad.rc == 1);
    CHECK(bad.err.find("not valid JSON") != std::string::npos);
}

TEST_CASE("non relations exit with code four") {
    auto r = run({"--rep", kRep1, "--D", "1", "decompose", "(x|y) = (y|x)"});
    CHECK(r.rc == 4);
    CHECK(r.err.rfind("error:", 0) == 0);
}

TEST_CASE("configuration problems exit with code one") {
    CHECK(run({"bounds"}).rc == 1);
    CHECK(run({"--rep", kRep1, "--D", "0", "bounds"}).rc == 1);
    CHECK(run({"--rep", kRep1, "--D", "-1/2", "bounds"}).rc == 1);
    CHECK(run({"--rep", tmp_path("torusrel_cli_norep.json"), "bounds"}).rc == 1);
    CHECK(run({"--rep", kRep1, "generators", "--n", "0", "--dcap", "2"}).rc == 1);
    CHECK(run({"frobnicate"}).rc == 1);
}

TEST_CASE("resource cap environment override exits with code three") {
    setenv("TORUSREL_RESOURCE_CAP", "3", 1);
    auto r = run({"--rep", kRep1, "generators", "--n", "2", "--dcap", "2"});
    unsetenv("TORUSREL_RESOURCE_CAP");
    CHECK(r.rc == 3);

    // Without the override the same call fits comfortably.
    CHECK(run({"--rep", kRep1, "generators", "--n", "2", "--dcap", "2"}).rc == 0);
}

TEST_CASE("help exits cleanly") {
    auto r = run({"--help"});
    CHECK(r.rc == 0);
    CHECK(r.out.find("torusrel") != std::string::npos);
    CHECK(r.out.find("bounds") != std::string::npos);
}

TEST_CASE("rearrange check stays within the default bound") {
    auto r = run({"--rep", kRep1, "rearrange", "--check", "--count", "5",
                  "--seed", "1"});
    REQUIRE(r.rc == 0);
    auto j = out_json(r);
    CHECK(j["count"] == 5);
    CHECK(j["D"] == "2");
    CHECK(j["ok"] == true);
    CHECK(j["max_col_norm_sq"].get<long long>() <= 4);
}

TEST_CASE("oracle check compares the markov degree against d1") {
    auto r = run({"--rep", kRep1, "--D", "1", "oracle-check", "--n", "2"});
    REQUIRE(r.rc == 0);
    auto j = out_json(r);
    CHECK(j["n"] == 2);
    CHECK(j["markov_degree"] == 4);
    CHECK(j["bound_d1"] == 14848);
    CHECK(j["ok"] == true);
}

TEST_CASE("config files resolve rep paths relative to their directory") {
    std::string rep = tmp_path("torusrel_cli_rep.json");
    write_file(rep, R"({"rank": 1, "weights": [[1], [-1]], "names": ["x", "y"]})");
    std::string cfg = tmp_path("torusrel_cli_cfg.json");
    write_file(cfg, R"({"rep_file": "torusrel_cli_rep.json", "D": "1"})");

    auto r = run({"--config", cfg, "bounds"});
    REQUIRE(r.rc == 0);
    CHECK(out_json(r)["d0"] == 4);

    // --rep wins over the config's rep_file, --D over its D.
    auto o = run({"--config", cfg, "--rep", kRep1, "--D", "1/2", "bounds"});
    REQUIRE(o.rc == 0);
    CHECK(out_json(o)["d0"] == 1);
}

TEST_CASE("load_config validates its document") {
    nlohmann::json rep = {{"rank", 1},
                          {"weights", {{1}, {-1}}},
                          {"names", {"x", "y"}}};

    RunConfig plain = load_config({{"rep", rep}});
    CHECK(plain.rep->names == std::vector<std::string>{"x", "y"});
    CHECK_FALSE(plain.D.has_value());
    CHECK(plain.effective_D() == Rational(2));

    RunConfig with_d = load_config({{"rep", rep}, {"D", 3}});
    CHECK(with_d.effective_D() == Rational(3));
    RunConfig frac = load_config({{"rep", rep}, {"D", "3/4"}});
    CHECK(frac.effective_D() == Rational(3, 4));

    RunConfig caps = load_config(
        {{"rep", rep}, {"caps", {{"hilbert_nodes", 5}, {"rearrange_nodes", 7}}}});
    CHECK(caps.caps.hilbert_nodes == 5);
    CHECK(caps.caps.rearrange_nodes == 7);
    CHECK(caps.caps.enumeration_cap == 500000); // untouched default

    CHECK_THROWS_AS(load_config({{"rep", rep}, {"rep_file", "x.json"}}), config_error);
    CHECK_THROWS_AS(load_config(nlohmann::json::object()), config_error);
    CHECK_THROWS_AS(load_config({{"rep", rep}, {"scale", 2}}), config_error);
    CHECK_THROWS_AS(load_config({{"rep", rep}, {"D", 0}}), config_error);
    CHECK_THROWS_AS(load_config({{"rep", rep}, {"D", 1.5}}), config_error);
    CHECK_THROWS_AS(load_config({{"rep", rep}, {"caps", {{"hilbert_nodes", 0}}}}),
                    config_error);
    CHECK_THROWS_AS(load_config({{"rep", rep}, {"caps", {{"budget", 3}}}}),
                    config_error);
}
