#include <doctest.h>

#include <json.hpp>

#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

// runs the CLI, capturing stdout (stderr folded in so error paths are visible)
RunResult run(const std::string& args) {
    std::string cmd = std::string(CSTAR_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf;
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, std::move(out)};
}

std::string data(const std::string& name) { return std::string(CSTAR_DATA_DIR) + "/" + name; }

}  // namespace

TEST_CASE("usage errors exit 2, help exits 0") {
    CHECK(run("").exit_code == 2);
    CHECK(run("--help").exit_code == 0);
    CHECK(run("analyze").exit_code == 2);            // missing file argument
    CHECK(run("analyze /nonexistent").exit_code == 2);
    CHECK(run("frobnicate x").exit_code == 2);
    CHECK(run("--format yaml analyze " + data("corr_loop.json")).exit_code == 2);
}

TEST_CASE("analyze reports ideals and flags") {
    RunResult r = run("analyze " + data("corr_loop.json"));
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("jx: 0") != std::string::npos);
    CHECK(r.out.find("passed: true") != std::string::npos);

    RunResult j = run("--format json analyze " + data("corr_two_cycle.json"));
    CHECK(j.exit_code == 0);
    nlohmann::json rep = nlohmann::json::parse(j.out);
    CHECK(rep["analysis"] == "analyze");
    CHECK(rep["results"]["bimodule"] == true);
    CHECK(rep["results"]["jx"] == nlohmann::json::array({0, 1}));
    CHECK(rep["results"]["left_inner_sample_residual"].get<double>() <= 1e-10);
}

TEST_CASE("reports are byte-deterministic") {
    std::string cmd = "analyze " + data("corr_two_cycle.json");
    CHECK(run(cmd).out == run(cmd).out);
    std::string jcmd = "--format json fock " + data("corr_o2.json") + " --depth 3";
    CHECK(run(jcmd).out == run(jcmd).out);
}

TEST_CASE("graph subcommand") {
    RunResult cls = run("graph " + data("graph_loop.json") + " --classify");
    CHECK(cls.exit_code == 0);
    CHECK(cls.out.find("regular: \"v\"") != std::string::npos);

    RunResult rel = run("--format json graph " + data("graph_o2.json") + " --relations");
    CHECK(rel.exit_code == 0);
    nlohmann::json jr = nlohmann::json::parse(rel.out);
    std::string rels = jr["results"]["relations"].get<std::string>();
    CHECK(rels.find("p[v] = s[e1] s[e1]* + s[e2] s[e2]*") != std::string::npos);

    RunResult ide = run("--format json graph " + data("graph_single_edge.json") + " --ideals");
    nlohmann::json ji = nlohmann::json::parse(ide.out);
    CHECK(ji["results"]["ideals"]["jx"] == nlohmann::json::array({"u"}));
    CHECK(ji["results"]["ideals"]["ker_phi"] == nlohmann::json::array({"v"}));

    // --to-corr writes a parseable correspondence
    std::string out_path = "/tmp/cstar_cli_corr.json";
    RunResult conv = run("graph " + data("graph_o2.json") + " --to-corr " + out_path);
    CHECK(conv.exit_code == 0);
    RunResult ana = run("--format json analyze " + out_path);
    CHECK(ana.exit_code == 0);
    nlohmann::json ja = nlohmann::json::parse(ana.out);
    CHECK(ja["results"]["bimodule"] == false);
    std::remove(out_path.c_str());
}

TEST_CASE("fock subcommand and the check-rep roundtrip") {
    RunResult d0 = run("--format json fock " + data("corr_loop.json") + " --depth 0");
    CHECK(d0.exit_code == 0);
    nlohmann::json j0 = nlohmann::json::parse(d0.out);
    CHECK(j0["results"]["level_dims"] == nlohmann::json::array({1}));

    std::string rep_path = "/tmp/cstar_cli_rep.json";
    RunResult fk = run("--format json fock " + data("corr_loop.json") +
                       " --depth 3 --dump-rep " + rep_path);
    CHECK(fk.exit_code == 0);  // axioms below the cut pass
    nlohmann::json jf = nlohmann::json::parse(fk.out);
    CHECK(jf["results"]["level_dims"] == nlohmann::json::array({1, 1, 1, 1}));
    CHECK(jf["results"]["axioms_below_cut"]["passed"] == true);
    // the covariance profile shows the vacuum defect
    auto profile = jf["results"]["covariance_profile_by_level"];
    REQUIRE(profile.size() == 1);
    auto lv = profile[0]["level_defects"];
    CHECK(lv[0].get<double>() == doctest::Approx(1.0));
    CHECK(lv[1].get<double>() <= 1e-10);

    // covariance against jx fails at the vacuum: exit 1
    RunResult cr = run("--format json check-rep " + data("corr_loop.json") + " " +
                       rep_path + " --ideal jx");
    CHECK(cr.exit_code == 1);
    nlohmann::json jc = nlohmann::json::parse(cr.out);
    CHECK(jc["results"]["covariance"]["passed"] == false);

    // the same defect table as the fock report, within 1e-12
    auto fock_cov = jf["results"]["covariance"]["entries"];
    auto rep_cov = jc["results"]["covariance"]["entries"];
    REQUIRE(fock_cov.size() == rep_cov.size());
    for (size_t i = 0; i < fock_cov.size(); ++i) {
        CHECK(fock_cov[i]["label"] == rep_cov[i]["label"]);
        CHECK(std::abs(fock_cov[i]["defect"].get<double>() -
                       rep_cov[i]["defect"].get<double>()) <= 1e-12);
    }

    // explicit empty ideal passes (Toeplitz reading), but the unrestricted
    // axiom (i) check still sees the cut, so use a tolerant tol to isolate it
    RunResult none = run("--format json --tol 1.5 check-rep " + data("corr_loop.json") +
                         " " + rep_path + " --ideal none");
    CHECK(none.exit_code == 0);
    std::remove(rep_path.c_str());
}

TEST_CASE("check-ck subcommand") {
    RunResult ok = run("check-ck " + data("graph_single_edge.json") + " " +
                       data("family_single_edge.json"));
    CHECK(ok.exit_code == 0);
    CHECK(ok.out.find("passed: true") != std::string::npos);

    RunResult bad = run("check-ck " + data("graph_o2.json") + " " +
                        data("family_single_edge.json"));
    CHECK(bad.exit_code == 2);  // family does not cover the O_2 graph
}
