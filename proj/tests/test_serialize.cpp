#include <catch_amalgamated.hpp>

#include <sstream>

#include "hiermat/serialize.hpp"

using namespace hiermat;

TEST_CASE("spectrum report JSON carries the full schema") {
    HierParams params(2, 3, Form::A, {0.4, 0.3, 0.2, 0.1});
    const json j = spectrum_report_json(params, spectrum_Q(params));

    CHECK(j["p"] == 2);
    CHECK(j["r"] == 3);
    CHECK(j["form"] == "A");
    CHECK(j["coeffs"].size() == 4);
    REQUIRE(j["lines"].size() == 4);
    CHECK(j["lines"][0]["label"] == "P1:mu=3");
    CHECK(j["lines"][0]["mult"] == 1);
    CHECK(j["lines"][0].contains("re"));
    CHECK(j["lines"][0].contains("im"));
    CHECK(j["lines"][3]["mult"] == 4);
}

TEST_CASE("label grammar for the three class families") {
    HierParams params(2, 3, Form::A, {0.4, 0.3, 0.2, 0.1});
    for (const auto& line : spectrum_Q(params)) CHECK(line.label.rfind("P1:mu=", 0) == 0);
    bool saw_partition = false;
    for (const auto& line : spectrum_Qrect_power(params)) {
        CHECK(line.label.rfind("P2:m=", 0) == 0);
        if (line.label == "P2:m=2,nu=[0,1]") saw_partition = true;
    }
    CHECK(saw_partition);
    bool saw_phase = false;
    for (const auto& line : spectrum_Qrect(params)) {
        CHECK(line.label.rfind("P3:j=", 0) == 0);
        if (line.label == "P3:j=1,m=2,nu=[0,1]") saw_phase = true;
    }
    CHECK(saw_phase);
}

TEST_CASE("verification report JSON mirrors the checks") {
    HierParams params(2, 2, Form::A, {0.5, 0.3, 0.2});
    const VerificationReport report = verify_spectrum(params, WhichOperator::Q);
    const json j = verification_report_json(report);

    CHECK(j["which"] == "Q");
    CHECK(j["all_pass"] == true);
    CHECK(j["params"]["p"] == 2);
    REQUIRE(j["checks"].size() == report.checks.size());
    for (const auto& check : j["checks"]) {
        CHECK(check.contains("name"));
        CHECK((check["status"] == "pass" || check["status"] == "fail"));
        CHECK(check.contains("max_residual"));
        CHECK(check.contains("detail"));
    }
}

TEST_CASE("moment report JSON") {
    MomentReport report;
    report.mean = 1.5;
    report.variance = 2.25;
    report.n_trials = 1000;
    report.std_error_mean = 0.047;
    report.source = MomentSource::MonteCarlo;
    const json j = moment_report_json(report);
    CHECK(j["mean"] == 1.5);
    CHECK(j["variance"] == 2.25);
    CHECK(j["n_trials"] == 1000);
    CHECK(j["source"] == "MonteCarlo");
}

TEST_CASE("sweep CSV header and exact-column handling") {
    SweepRow row;
    row.beta = 0.5;
    row.mean_analytic = 1.25;
    row.var_analytic = 1.0;
    row.mean_mc = 1.24;
    row.var_mc = 0.99;
    row.stderr_mean = 0.01;
    row.n_trials = 500;
    row.r = 6;
    row.p = 2;
    row.seed = 7;

    SECTION("without oracle columns") {
        std::ostringstream out;
        write_sweep_csv(out, {row});
        std::istringstream in(out.str());
        std::string header, data;
        std::getline(in, header);
        std::getline(in, data);
        CHECK(header ==
              "beta,mean_analytic,var_analytic,mean_mc,var_mc,stderr_mean,n_trials,r,p,seed");
        CHECK(data == "0.5,1.25,1,1.24,0.98999999999999999,0.01,500,6,2,7");
    }

    SECTION("with oracle columns appended") {
        row.mean_exact = 1.251;
        row.var_exact = 1.002;
        std::ostringstream out;
        write_sweep_csv(out, {row});
        std::string header;
        std::istringstream in(out.str());
        std::getline(in, header);
        CHECK(header ==
              "beta,mean_analytic,var_analytic,mean_mc,var_mc,stderr_mean,n_trials,r,p,seed,"
              "mean_exact,var_exact");
    }

    SECTION("JSON mirror carries the same fields") {
        row.mean_exact = 1.251;
        row.var_exact = 1.002;
        const json arr = sweep_rows_json({row});
        REQUIRE(arr.size() == 1);
        for (const char* key : {"beta", "mean_analytic", "var_analytic", "mean_mc", "var_mc",
                                "stderr_mean", "n_trials", "r", "p", "seed", "mean_exact",
                                "var_exact"})
            CHECK(arr[0].contains(key));
    }
}

TEST_CASE("double formatting is round-trip exact") {
    for (double x : {0.1, 1.0 / 3.0, 12345.678901234567, 1e-300, 0.0}) {
        const std::string s = format_double(x);
        CHECK(std::stod(s) == x);
    }
}
