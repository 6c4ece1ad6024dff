// Copyright 2026 The latnorm authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"
#include "helpers.hpp"
#include "json.hpp"
#include "latnorm/latnorm.hpp"

namespace {

using json = nlohmann::json;

struct CliResult {
    int code = 0;
    std::string out;
    std::string err;
};

CliResult run(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("latnorm");
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    CliResult r;
    r.code = latnorm_cli::run_cli(static_cast<int>(argv.size()), argv.data(),
                                  out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::filesystem::path scratch_dir() {
    auto dir = std::filesystem::temp_directory_path() / "latnorm_cli_test";
    std::filesystem::create_directories(dir);
    return dir;
}

std::string write_file(const std::string& name, const std::string& content) {
    auto path = scratch_dir() / name;
    std::ofstream f(path);
    f << content;
    return path.string();
}

std::string param_a_file() {
    return write_file("pa.json",
                      R"({"xi1":[0.1,-0.3],"xi2":[[0.5,0.2],[0.2,0.8]]})");
}

std::string param_b_file() {
    return write_file("pb.json",
                      R"({"xi1":[-0.2,0.1],"xi2":[[0.4,-0.1],[-0.1,0.6]]})");
}

double rel(double got, double want) {
    return std::abs(got - want) / std::abs(want);
}

}  // namespace

TEST_CASE("cli: theta value, gradient echo, 17-digit round trip") {
    CliResult r = run({"theta", "-p", param_a_file()});
    REQUIRE(r.code == 0);
    REQUIRE(!r.out.empty());
    CHECK(r.out.back() == '\n');
    json j = json::parse(r.out);
    CHECK(rel(j["value"].get<double>(), 2.863035537801042627) < 1e-13);
    CHECK(rel(j["log_value"].get<double>(), 1.051882438823097428) < 1e-13);
    CHECK(j["points_used"].get<long>() > 0);
    CHECK(j["grad_log_xi1"].size() == 2);

    // %.17g output must re-parse to the same bits as the library result.
    latnorm::ThetaResult direct = latnorm::theta(testutil::pair_a());
    CHECK(j["value"].get<double>() == direct.value);
    CHECK(j["grad_log_xi1"][0].get<double>() == direct.grad_log_xi1(0));

    // The echoed xi1[0] = 0.1 shows the full 17-digit form.
    CHECK(r.out.find("0.10000000000000001") != std::string::npos);
}

TEST_CASE("cli: pmf frozen values and off-lattice rejection") {
    std::string p1 = write_file("p1d.json", R"({"xi1":[0.0],"xi2":[[1.0]]})");
    CliResult r0 = run({"pmf", "-p", p1, "--point", "0"});
    REQUIRE(r0.code == 0);
    CHECK(rel(json::parse(r0.out)["pmf"].get<double>(),
              0.9204417878355909839) < 1e-13);
    CliResult r1 = run({"pmf", "-p", p1, "--point", "1"});
    REQUIRE(r1.code == 0);
    CHECK(rel(json::parse(r1.out)["pmf"].get<double>(),
              0.03977589618608762743) < 1e-13);

    CliResult bad = run({"pmf", "-p", p1, "--point", "0.5"});
    CHECK(bad.code == 2);
    CHECK(json::parse(bad.out)["error"]["type"] == "ValidationError");
}

TEST_CASE("cli: divergence frozen values and oracle cross-check") {
    std::string pa = param_a_file();
    std::string pb = param_b_file();

    CliResult kl = run({"divergence", "-p", pa, "-q", pb, "--kind", "kl"});
    REQUIRE(kl.code == 0);
    CHECK(rel(json::parse(kl.out)["value"].get<double>(),
              1.988771266093275244) < 1e-12);

    CliResult ren = run({"divergence", "-p", pa, "-q", pb, "--kind", "renyi",
                         "--alpha", "2"});
    REQUIRE(ren.code == 0);
    CHECK(rel(json::parse(ren.out)["value"].get<double>(),
              6.073848273378661311) < 1e-12);

    CliResult orc = run({"divergence", "-p", pa, "-q", pb, "--kind", "kl",
                         "--oracle", "--oracle-box", "22"});
    REQUIRE(orc.code == 0);
    json oj = json::parse(orc.out);
    CHECK(oj["oracle_abs_diff"].get<double>() < 1e-9);

    // The chernoff kind fills alpha with the optimal skew.
    CliResult ch = run({"divergence", "-p", pa, "-q", pb, "--kind", "chernoff",
                        "--oracle", "--oracle-box", "22"});
    REQUIRE(ch.code == 0);
    json cj = json::parse(ch.out);
    CHECK(std::abs(cj["alpha"].get<double>() - 0.535035966063983811) < 1e-8);
    CHECK(cj["oracle_abs_diff"].get<double>() < 1e-9);
}

TEST_CASE("cli: chernoff subcommand frozen values") {
    CliResult r = run({"chernoff", "-p", param_a_file(), "-q", param_b_file()});
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    CHECK(rel(j["value"].get<double>(), 0.4074891519594644495) < 1e-11);
    CHECK(std::abs(j["alpha_star"].get<double>() - 0.535035966063983811) < 1e-9);
    CHECK(j["bracket_width"].get<double>() <= 1e-12);
}

TEST_CASE("cli: convert natural to moment and back") {
    CliResult fwd = run({"convert", "-p", param_a_file(), "--to", "moment"});
    REQUIRE(fwd.code == 0);
    json f = json::parse(fwd.out);
    CHECK(rel(f["mu"][0].get<double>(), 0.3843075297924185616) < 1e-12);
    CHECK(rel(f["mu"][1].get<double>(), -0.4649039730967067986) < 1e-12);
    CHECK(rel(f["sigma"][0][0].get<double>(), 0.3668990437688724077) < 1e-12);
    CHECK(rel(f["sigma"][0][1].get<double>(), -0.1110146463550270155) < 1e-12);
    CHECK(rel(f["eta1"][0].get<double>(), 2.414675424630205502) < 1e-12);
    CHECK(rel(f["eta2"][0][1].get<double>(), 0.910058896754601851) < 1e-12);
    CHECK(f["iterations"].get<int>() == 0);

    // Feed the printed moments back in; Newton must recover the natural
    // parameter.
    std::string mfile = write_file(
        "pa_moment.json",
        std::string("{\"mu\":[") + f["mu"][0].dump() + "," + f["mu"][1].dump() +
            "],\"sigma\":[[" + f["sigma"][0][0].dump() + "," +
            f["sigma"][0][1].dump() + "],[" + f["sigma"][1][0].dump() + "," +
            f["sigma"][1][1].dump() + "]]}");
    CliResult bwd = run({"convert", "-p", mfile, "--to", "natural"});
    REQUIRE(bwd.code == 0);
    json b = json::parse(bwd.out);
    CHECK(std::abs(b["xi1"][0].get<double>() - 0.1) < 1e-7);
    CHECK(std::abs(b["xi1"][1].get<double>() - (-0.3)) < 1e-7);
    CHECK(std::abs(b["xi2"][0][1].get<double>() - 0.2) < 1e-7);
    CHECK(b["iterations"].get<int>() >= 1);
    CHECK(std::abs(b["roundtrip_mu"][0].get<double>() -
                   f["mu"][0].get<double>()) < 1e-9);
}

TEST_CASE("cli: sample determinism, csv output, mle round trip") {
    std::string pa = param_a_file();

    CliResult s1 = run({"sample", "-p", pa, "-n", "50", "--seed", "77"});
    CliResult s2 = run({"sample", "-p", pa, "-n", "50", "--seed", "77"});
    REQUIRE(s1.code == 0);
    CHECK(s1.out == s2.out);
    json j = json::parse(s1.out);
    CHECK(j["n"].get<std::size_t>() == 50);
    CHECK(j["points"].size() == 50);
    CHECK(j["method"] == "exact_eps");

    for (const char* method : {"h1", "h2"}) {
        CliResult a = run({"sample", "-p", pa, "-n", "20", "--seed", "5",
                           "--method", method});
        CliResult b = run({"sample", "-p", pa, "-n", "20", "--seed", "5",
                           "--method", method});
        REQUIRE(a.code == 0);
        CHECK(a.out == b.out);
    }

    CliResult csv = run({"sample", "-p", pa, "-n", "200", "--seed", "3",
                         "--csv"});
    REQUIRE(csv.code == 0);
    CHECK(csv.out.rfind("x1,x2\n", 0) == 0);
    CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 201);

    std::string data = write_file("samples.csv", csv.out);
    CliResult fit = run({"mle", "--data", data});
    REQUIRE(fit.code == 0);
    json m = json::parse(fit.out);
    CHECK(m["n"].get<std::size_t>() == 200);
    // Loose agreement with the generating parameter's mean.
    CHECK(std::abs(m["moment"]["mu"][0].get<double>() - 0.3843075297924185616) <
          0.25);
    CHECK(m["natural"]["xi1"].size() == 2);
    CHECK(m["final_residual"].get<double>() <= 1e-10);
}

TEST_CASE("cli: reproduce worked example") {
    CliResult r = run({"reproduce"});
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["pass"].get<bool>());
    CHECK(j["bhattacharyya_ok"].get<bool>());
    CHECK(j["renyi_ok"].get<bool>());
    CHECK(j["kl_ok"].get<bool>());
    CHECK(std::abs(j["bhattacharyya"].get<double>() - 1.6259948590224578) <=
          1e-6);
    CHECK(std::abs(j["kl_bregman"].get<double>() - 7.841371347366552) <= 1e-3);
    CHECK(std::abs(j["kl_mixed"].get<double>() - 7.841371347366552) <= 1e-3);
}

TEST_CASE("cli: parse and validation failures exit 2") {
    CliResult missing = run({"theta", "-p", "/nonexistent/nope.json"});
    CHECK(missing.code == 2);
    CHECK(json::parse(missing.out)["error"]["type"] == "ValidationError");

    std::string bad = write_file("bad.json", "{ this is not json");
    CHECK(run({"theta", "-p", bad}).code == 2);

    std::string both = write_file(
        "both.json", R"({"xi1":[0.0],"xi2":[[1.0]],"mu":[0.0],"sigma":[[1.0]]})");
    CHECK(run({"theta", "-p", both}).code == 2);

    std::string pa = param_a_file();
    std::string pb = param_b_file();
    CliResult neg = run({"divergence", "-p", pa, "-q", pb, "--kind", "renyi",
                         "--alpha", "-1"});
    CHECK(neg.code == 2);
    CHECK(json::parse(neg.out)["error"]["type"] == "ValidationError");

    CliResult conj = run({"divergence", "-p", pa, "-q", pb, "--kind",
                          "hoelder", "--alpha-h", "1.0"});
    CHECK(conj.code == 2);
    CHECK(json::parse(conj.out)["error"]["type"] == "ConjugateExponentError");

    CliResult unk = run({"frobnicate"});
    CHECK(unk.code == 2);
    CHECK(json::parse(unk.out)["error"]["type"] == "ParseError");

    CHECK(run({}).code == 2);
    CHECK(run({"divergence", "-p", pa, "-q", pb, "--kind", "nope"}).code == 2);
    CHECK(run({"convert", "-p", pa, "--to", "bogus"}).code == 2);
    CHECK(run({"sample", "-p", pa, "-n", "1", "--method", "bogus"}).code == 2);

    // Mismatched lattices between the two sides.
    std::string pl = write_file(
        "pa_lat.json",
        R"({"xi1":[0.1,-0.3],"xi2":[[0.5,0.2],[0.2,0.8]],)"
        R"("lattice":{"basis":[[2.0,0.0],[0.0,2.0]]}})");
    CHECK(run({"divergence", "-p", pl, "-q", pb, "--kind", "kl"}).code == 2);

    // Dimension mismatch between the two sides.
    std::string p1 = write_file("p1d.json", R"({"xi1":[0.0],"xi2":[[1.0]]})");
    CHECK(run({"divergence", "-p", pa, "-q", p1, "--kind", "kl"}).code == 2);
}

TEST_CASE("cli: numerical domain failures exit 3") {
    std::string p01 = write_file("p01.json", R"({"xi1":[0.0],"xi2":[[0.1]]})");
    std::string p02 = write_file("p02.json", R"({"xi1":[0.0],"xi2":[[0.2]]})");
    CliResult dom = run({"divergence", "-p", p01, "-q", p02, "--kind", "renyi",
                         "--alpha", "3"});
    CHECK(dom.code == 3);
    CHECK(json::parse(dom.out)["error"]["type"] == "DomainError");

    std::string flat = write_file("flat.csv", "x1,x2\n1,2\n1,2\n1,2\n");
    CliResult deg = run({"mle", "--data", flat});
    CHECK(deg.code == 3);
    CHECK(json::parse(deg.out)["error"]["type"] == "DegenerateSample");

    // Mode so far from the origin that the enumeration radius (measured in
    // the whitened metric, so it scales with the peak height) exceeds the cap.
    std::string far = write_file("far.json", R"({"xi1":[300.0],"xi2":[[1.0]]})");
    CliResult cap = run({"theta", "-p", far});
    CHECK(cap.code == 3);
    CHECK(json::parse(cap.out)["error"]["type"] == "RadiusCapExceeded");
}

TEST_CASE("cli: help exits 0") {
    CliResult r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("Discrete normal") != std::string::npos);
    CHECK(r.out.find("divergence") != std::string::npos);
}
