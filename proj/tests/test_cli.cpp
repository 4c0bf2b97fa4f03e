#include <catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "hiermat/cli.hpp"

using namespace hiermat;

namespace {

struct CliResult {
    int exit_code;
    std::string out;
    std::string err;
};

CliResult invoke(std::initializer_list<const char*> args) {
    std::vector<const char*> argv = {"hiermat"};
    argv.insert(argv.end(), args.begin(), args.end());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST_CASE("spectrum subcommand prints the line report") {
    const CliResult res =
        invoke({"spectrum", "-p", "2", "-r", "3", "--coeffs", "0.4,0.3,0.2,0.1", "--which", "Q"});
    REQUIRE(res.exit_code == 0);
    const json j = json::parse(res.out);
    REQUIRE(j["lines"].size() == 4);
    CHECK(j["lines"][0]["mult"] == 1);
    CHECK(j["lines"][1]["mult"] == 1);
    CHECK(j["lines"][2]["mult"] == 2);
    CHECK(j["lines"][3]["mult"] == 4);
}

TEST_CASE("verify subcommand is the acceptance gate") {
    SECTION("passing configuration exits zero") {
        const CliResult res = invoke(
            {"verify", "-p", "2", "-r", "5", "--boltzmann", "1.0", "--which", "Qrect"});
        CHECK(res.exit_code == 0);
        const json j = json::parse(res.out);
        CHECK(j["all_pass"] == true);
    }
    SECTION("domain errors exit 1 with the error name on stderr") {
        const CliResult res = invoke(
            {"verify", "-p", "2", "-r", "4", "--boltzmann", "1.0", "--which", "Qrect"});
        CHECK(res.exit_code == 1);
        CHECK(res.err.find("NonPrimeR") == 0);
    }
}

TEST_CASE("simulate subcommand reports Monte Carlo moments") {
    const CliResult res = invoke({"simulate", "-p", "2", "-r", "6", "--boltzmann", "1.0",
                                  "--seed", "11", "--trials", "2000"});
    REQUIRE(res.exit_code == 0);
    const json j = json::parse(res.out);
    CHECK(j["n_trials"] == 2000);
    CHECK(j["source"] == "MonteCarlo");
    CHECK(j["mean"].get<double>() > 0.0);

    const CliResult rerun = invoke({"simulate", "-p", "2", "-r", "6", "--boltzmann", "1.0",
                                    "--seed", "11", "--trials", "2000"});
    CHECK(rerun.out == res.out);
}

TEST_CASE("sweep subcommand writes the CSV contract") {
    const char* path = "/tmp/hiermat_test_sweep.csv";
    std::remove(path);
    const CliResult res =
        invoke({"sweep", "-p", "2", "-r", "6", "--beta", "0.5:2:3:log", "--trials", "500",
                "--seed", "3", "-o", path});
    REQUIRE(res.exit_code == 0);

    std::ifstream file(path);
    REQUIRE(file.good());
    std::string header;
    std::getline(file, header);
    // r=6 admits the exact-oracle columns
    CHECK(header ==
          "beta,mean_analytic,var_analytic,mean_mc,var_mc,stderr_mean,n_trials,r,p,seed,"
          "mean_exact,var_exact");
    int rows = 0;
    std::string line;
    while (std::getline(file, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 3);

    SECTION("byte-identical on rerun") {
        std::ifstream again(path);
        std::stringstream first;
        first << again.rdbuf();
        const char* path2 = "/tmp/hiermat_test_sweep2.csv";
        std::remove(path2);
        invoke({"sweep", "-p", "2", "-r", "6", "--beta", "0.5:2:3:log", "--trials", "500",
                "--seed", "3", "-o", path2});
        std::ifstream second_file(path2);
        std::stringstream second;
        second << second_file.rdbuf();
        CHECK(first.str() == second.str());
    }

    SECTION("json mirror") {
        const CliResult jr =
            invoke({"sweep", "-p", "2", "-r", "6", "--beta", "0.5:2:3:log", "--trials", "100",
                    "--seed", "3", "--format", "json"});
        REQUIRE(jr.exit_code == 0);
        const json arr = json::parse(jr.out);
        REQUIRE(arr.size() == 3);
        CHECK(arr[0].contains("mean_analytic"));
        CHECK(arr[0].contains("mean_exact"));
        CHECK(arr[0]["seed"] == 3);
    }
}

TEST_CASE("usage errors exit 2") {
    CHECK(invoke({"spectrum", "--no-such-flag"}).exit_code == 2);
    CHECK(invoke({}).exit_code == 2);
    CHECK(invoke({"sweep", "--beta", "nonsense"}).exit_code == 1);  // domain, not usage
}

TEST_CASE("config file merges under flags") {
    const char* path = "/tmp/hiermat_test_config.json";
    {
        std::ofstream file(path);
        file << R"({"p": 2, "r": 3, "coeffs": [0.4, 0.3, 0.2, 0.1], "which": "Q"})";
    }
    // flag overrides r from the config file
    const CliResult res = invoke({"spectrum", "--config", path, "-r", "2", "--coeffs",
                                  "0.5,0.3,0.2"});
    REQUIRE(res.exit_code == 0);
    const json j = json::parse(res.out);
    CHECK(j["r"] == 2);
    REQUIRE(j["lines"].size() == 3);

    // config file alone
    const CliResult pure = invoke({"spectrum", "--config", path});
    REQUIRE(pure.exit_code == 0);
    CHECK(json::parse(pure.out)["r"] == 3);
}

TEST_CASE("show-config prints the effective configuration") {
    const CliResult res = invoke({"sweep", "-p", "2", "-r", "10", "--beta", "0.1:8:80:log",
                                  "--show-config"});
    REQUIRE(res.exit_code == 0);
    const json j = json::parse(res.out);
    CHECK(j["command"] == "sweep");
    CHECK(j["r"] == 10);
    CHECK(j["beta_grid"]["points"] == 80);
    CHECK(j["beta_grid"]["spacing"] == "log");
}

TEST_CASE("beta grid parsing") {
    const BetaGrid grid = parse_beta_grid("0.1:8:80:log");
    const auto values = grid.values();
    REQUIRE(values.size() == 80);
    CHECK(values.front() == Catch::Approx(0.1));
    CHECK(values.back() == Catch::Approx(8.0));
    for (std::size_t i = 0; i + 1 < values.size(); ++i) CHECK(values[i] < values[i + 1]);
    // log spacing: constant ratio
    const double ratio = values[1] / values[0];
    CHECK(values[41] / values[40] == Catch::Approx(ratio));

    const auto linear = parse_beta_grid("1:3:5:linear").values();
    CHECK(linear[1] - linear[0] == Catch::Approx(0.5));

    CHECK_THROWS_AS(parse_beta_grid("1:2:3"), InvalidArgument);
    CHECK_THROWS_AS(parse_beta_grid("3:1:5:log"), InvalidArgument);
    CHECK_THROWS_AS(parse_beta_grid("1:2:5:cubic"), InvalidArgument);
}
