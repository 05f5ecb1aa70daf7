#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gdnm/cli.hpp"
#include "gdnm/report.hpp"

using namespace gdnm;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path test_dir() {
    const fs::path dir = fs::temp_directory_path() / "gdnm_cli_tests";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_scalar_instance(const fs::path& dir) {
    std::ofstream(dir / "A.csv") << "1\n";
    std::ofstream(dir / "b.csv") << "2\n";
}

} // namespace

TEST_CASE("gen writes deterministic files of the right shape") {
    const auto dir = test_dir();
    const std::string prefix = (dir / "inst").string();
    REQUIRE(cli::run({"gen", "--m", "2", "--n", "3", "--seed", "7", "--out-prefix", prefix}) == 0);
    const std::string a1 = slurp(prefix + "_A.csv");
    const std::string b1 = slurp(prefix + "_b.csv");
    CHECK(std::count(a1.begin(), a1.end(), '\n') == 2);
    CHECK(std::count(a1.begin(), a1.end(), ',') == 4);  // 2 rows x 3 cols
    CHECK(std::count(b1.begin(), b1.end(), '\n') == 2);

    REQUIRE(cli::run({"gen", "--m", "2", "--n", "3", "--seed", "7", "--out-prefix", prefix}) == 0);
    CHECK(slurp(prefix + "_A.csv") == a1);  // identical bytes
    CHECK(slurp(prefix + "_b.csv") == b1);

    CHECK(cli::run({"gen", "--m", "0", "--n", "3", "--seed", "7", "--out-prefix", prefix}) == 1);
    CHECK(cli::run({"gen", "--m", "2", "--n", "3", "--seed", "7", "--out-prefix",
                    "/nonexistent-dir/x"}) == 1);
}

TEST_CASE("solve reports the scalar soft-threshold solution") {
    const auto dir = test_dir();
    write_scalar_instance(dir);
    const std::string out = (dir / "report.json").string();
    const int rc = cli::run({"solve", "--matrix", (dir / "A.csv").string(), "--rhs",
                             (dir / "b.csv").string(), "--mu", "0.5", "--out", out});
    REQUIRE(rc == 0);
    const json doc = json::parse(slurp(out));
    CHECK(doc.at("schema_version") == report::kSchemaVersion);
    CHECK(doc.at("config").at("mu") == 0.5);
    CHECK(doc.at("config").at("solver") == "gdnm");
    const auto& result = doc.at("result");
    CHECK(result.at("status") == "Converged");
    const double x = result.at("x")[0].get<double>();
    CHECK(std::fabs(x - 1.5) <= 1e-6);
    CHECK(result.at("final_eta").get<double>() < 1e-6);
    CHECK_FALSE(result.at("trace").empty());
}

TEST_CASE("solve validates its inputs") {
    const auto dir = test_dir();
    write_scalar_instance(dir);
    const std::string a = (dir / "A.csv").string();
    const std::string b = (dir / "b.csv").string();
    CHECK(cli::run({"solve", "--matrix", a, "--rhs", b, "--mu", "-1"}) == 1);
    CHECK(cli::run({"solve", "--matrix", a, "--rhs", b, "--solver", "nope"}) == 1);
    CHECK(cli::run({"solve", "--matrix", (dir / "missing.csv").string(), "--rhs", b}) == 1);

    std::ofstream(dir / "bad.csv") << "1,2\n3\n";
    CHECK(cli::run({"solve", "--matrix", (dir / "bad.csv").string(), "--rhs", b}) == 1);

    std::ofstream(dir / "b3.csv") << "1\n2\n3\n";
    CHECK(cli::run({"solve", "--matrix", a, "--rhs", (dir / "b3.csv").string(), "--mu", "0.5"}) ==
          1);
}

TEST_CASE("solve agrees across solvers on the scalar instance") {
    const auto dir = test_dir();
    write_scalar_instance(dir);
    const std::string a = (dir / "A.csv").string();
    const std::string b = (dir / "b.csv").string();

    double objs[2];
    int idx = 0;
    for (const std::string solver_name : {"gdnm", "fista"}) {
        const std::string out = (dir / ("rep_" + solver_name + ".json")).string();
        REQUIRE(cli::run({"solve", "--matrix", a, "--rhs", b, "--mu", "0.5", "--solver",
                          solver_name, "--out", out}) == 0);
        const json doc = json::parse(slurp(out));
        objs[idx++] = doc.at("result").at("final_objective").get<double>();
    }
    CHECK(std::fabs(objs[0] - objs[1]) <= 1e-6 * (1.0 + std::fabs(objs[0])));
}

TEST_CASE("solve emits a csv trace when asked") {
    const auto dir = test_dir();
    write_scalar_instance(dir);
    const std::string out = (dir / "trace.csv").string();
    REQUIRE(cli::run({"solve", "--matrix", (dir / "A.csv").string(), "--rhs",
                      (dir / "b.csv").string(), "--mu", "0.5", "--format", "csv", "--out",
                      out}) == 0);
    const std::string csv = slurp(out);
    CHECK(csv.rfind("k,objective,grad_norm,step_tau,", 0) == 0);
}

TEST_CASE("bench writes the fixed-header table") {
    const auto dir = test_dir();
    const std::string out = (dir / "bench.csv").string();
    REQUIRE(cli::run({"bench", "--sizes", "64x16", "--solvers", "gdnm,fista", "--seed", "3",
                      "--out", out}) == 0);
    auto rows = report::bench_rows_from_csv(slurp(out));
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].solver == "gdnm");
    CHECK(rows[1].solver == "fista");
    CHECK(rows[0].status == "Converged");
    CHECK(rows[1].status == "Converged");
}

TEST_CASE("bench validates size tokens and modes") {
    CHECK(cli::run({"bench", "--sizes", "64y16"}) == 1);
    CHECK(cli::run({"bench", "--sizes", "0x16"}) == 1);
    CHECK(cli::run({"bench", "--sizes", "8x4", "--solvers", "gdnm,bogus"}) == 1);
    CHECK(cli::run({"bench", "--sizes", "8x4", "--mu-mode", "sometimes"}) == 1);
    CHECK(cli::run({"bench", "--sizes", "8x4", "--mu-mode", "fixed:-2"}) == 1);
}

TEST_CASE("bench json embeds the prng identifier and echoes the config") {
    const auto dir = test_dir();
    const std::string out = (dir / "bench.json").string();
    REQUIRE(cli::run({"bench", "--sizes", "16x4", "--solvers", "admm", "--seed", "5",
                      "--mu-mode", "fixed:1e-3", "--format", "json", "--out", out}) == 0);
    const json doc = json::parse(slurp(out));
    CHECK(doc.at("config").at("prng_id") == bench::kPrngId);
    CHECK(doc.at("config").at("seed") == 5);
    CHECK(doc.at("config").at("mu_mode") == "fixed:1e-3");
    CHECK(doc.at("result").at("rows").size() == 1);
}

TEST_CASE("unknown subcommands and missing flags are input errors") {
    CHECK(cli::run({"frobnicate"}) == 1);
    CHECK(cli::run({"solve"}) == 1);
    CHECK(cli::run({}) == 1);
}

TEST_CASE("non-finite trace fields round-trip through json as null") {
    solver::IterationRecord rec;
    rec.k = 3;
    rec.objective = 1.25;
    rec.kkt_eta = std::numeric_limits<double>::quiet_NaN();
    const json j = report::to_json(rec);
    CHECK(j.at("kkt_eta").is_null());
    auto back = report::iteration_from_json(json::parse(j.dump()));
    CHECK(std::isnan(back.kkt_eta));
    CHECK(back.objective == rec.objective);
    CHECK(back.k == rec.k);
}

TEST_CASE("solve json report round-trips through the serializer") {
    const auto dir = test_dir();
    write_scalar_instance(dir);
    const std::string out = (dir / "round.json").string();
    REQUIRE(cli::run({"solve", "--matrix", (dir / "A.csv").string(), "--rhs",
                      (dir / "b.csv").string(), "--mu", "0.5", "--out", out}) == 0);
    const json doc = json::parse(slurp(out));

    // result parses back into a report and re-serializes identically
    auto rep = report::solve_report_from_json(doc.at("result"));
    json again = report::to_json(rep);
    for (const auto& key : {"status", "iterations", "final_objective", "final_grad_norm",
                            "final_eta", "trace", "rate_diagnostics"})
        CHECK(again.at(key) == doc.at("result").at(key));
    CHECK(doc.dump() == json::parse(doc.dump()).dump());
}
