#include <catch_amalgamated.hpp>

#include <cmath>

#include "hiermat/noise.hpp"
#include "hiermat/oracle.hpp"
#include "hiermat/rng.hpp"

using namespace hiermat;

namespace {

std::vector<double> random_coeffs(Xoshiro256& rng, int r) {
    std::vector<double> a(static_cast<std::size_t>(r) + 1);
    for (double& x : a) x = 0.1 + 0.9 * rng.uniform();
    return a;
}

} // namespace

TEST_CASE("verification passes on random coefficients for all three operators") {
    Xoshiro256 rng(101, 0);
    for (auto [p, r] : {std::pair{2, 3}, std::pair{3, 2}}) {
        HierParams params(p, r, Form::A, random_coeffs(rng, r));
        for (WhichOperator which :
             {WhichOperator::Q, WhichOperator::QrectPower, WhichOperator::Qrect}) {
            const VerificationReport report = verify_spectrum(params, which);
            INFO("p=" << p << " r=" << r << " which=" << to_string(which));
            for (const auto& check : report.checks) {
                INFO(check.name << ": " << check.detail
                                << " (residual " << check.max_residual << ")");
                CHECK(check.pass);
            }
            CHECK(report.all_pass());
        }
    }
}

TEST_CASE("identity coefficients give one aggregated full-deficiency check") {
    HierParams params(2, 3, Form::A, {1, 0, 0, 0});
    const VerificationReport report = verify_spectrum(params, WhichOperator::Q);
    CHECK(report.all_pass());
    // all four classes share the value 1; each rank check sees deficiency 8
    int rank_checks = 0;
    for (const auto& check : report.checks)
        if (check.name.rfind("rank:", 0) == 0) {
            ++rank_checks;
            CHECK(check.detail.find("rank deficiency 8") != std::string::npos);
        }
    CHECK(rank_checks == 4);
}

TEST_CASE("every spectral line appears in exactly one rank and one residual check") {
    HierParams params(2, 3, Form::A, {0.4, 0.3, 0.2, 0.1});
    for (WhichOperator which :
         {WhichOperator::Q, WhichOperator::QrectPower, WhichOperator::Qrect}) {
        const VerificationReport report = verify_spectrum(params, which);
        std::vector<SpectralLine> lines;
        switch (which) {
            case WhichOperator::Q: lines = spectrum_Q(params); break;
            case WhichOperator::QrectPower: lines = spectrum_Qrect_power(params); break;
            case WhichOperator::Qrect: lines = spectrum_Qrect(params); break;
        }
        for (const auto& line : lines) {
            int rank_hits = 0, residual_hits = 0;
            for (const auto& check : report.checks) {
                if (check.name == "rank:" + line.label) ++rank_hits;
                if (check.name == "residual:" + line.label) ++residual_hits;
            }
            INFO(to_string(which) << " " << line.label);
            CHECK(rank_hits == 1);
            CHECK(residual_hits == 1);
        }
    }
}

TEST_CASE("the phase-convention check records the empirical resolution") {
    HierParams params(2, 5, Form::A, {0.3, 0.25, 0.2, 0.15, 0.05, 0.05});
    const VerificationReport report = verify_spectrum(params, WhichOperator::Qrect);
    const auto it = std::find_if(report.checks.begin(), report.checks.end(),
                                 [](const CheckResult& c) {
                                     return c.name == "eigenvalue_convention";
                                 });
    REQUIRE(it != report.checks.end());
    CHECK(it->pass);
    CHECK(it->detail.find("direct phase convention") != std::string::npos);
    CHECK(it->max_residual <= 1e-10);
}

TEST_CASE("verification respects preconditions") {
    HierParams params(2, 4, Form::A, {0.4, 0.3, 0.2, 0.05, 0.05});
    CHECK_THROWS_AS(verify_spectrum(params, WhichOperator::Qrect), NonPrimeR);
    HierParams big(2, 13, Form::A, std::vector<double>(14, 0.0));
    CHECK_THROWS_AS(verify_spectrum(big, WhichOperator::Q), DimensionLimitExceeded);
}

TEST_CASE("class count grows with depth as partitions plus the two edge classes") {
    Xoshiro256 rng(107, 0);
    HierParams params(2, 5, Form::A, random_coeffs(rng, 5));
    const VerificationReport report = verify_spectrum(params, WhichOperator::QrectPower);
    CHECK(report.all_pass());
    std::size_t n_parts = 0;
    for (int m = 1; m <= 4; ++m) n_parts += enumerate_partitions(5, m).size();
    CHECK(spectrum_Qrect_power(params).size() == n_parts + 2);
}

TEST_CASE("exact evolution conserves probability and stays stochastic") {
    const NoiseModel model = boltzmann_model(2, 6, 1.0);
    const HierParams weights = model.params();

    const ExactEvolution evo = exact_evolution(weights, 6, Word(6, 0));
    double sum = 0.0;
    for (double w : evo.w) {
        CHECK(w >= 0.0);
        sum += w;
    }
    CHECK(sum == Catch::Approx(1.0).margin(1e-10));

    // the dense operator is doubly stochastic: columns and rows both sum to 1
    const DenseOperator M = build_Qrect(weights);
    for (std::size_t i = 0; i < M.dim(); ++i) {
        cplx row{}, col{};
        for (std::size_t j = 0; j < M.dim(); ++j) {
            row += M.at(i, j);
            col += M.at(j, i);
        }
        CHECK(std::abs(row - cplx(1.0)) < 1e-12);
        CHECK(std::abs(col - cplx(1.0)) < 1e-12);
    }
}

TEST_CASE("normalization is equivalent to a unit top eigenvalue") {
    Xoshiro256 rng(109, 0);
    std::vector<double> a(7);
    double sum = 0.0;
    for (double& x : a) {
        x = rng.uniform();
        sum += x;
    }
    for (double& x : a) x /= sum;
    HierParams params(2, 6, Form::A, a);
    const std::vector<double> lambda = level_values(params);
    CHECK(std::abs(lambda.back() - 1.0) <= 1e-12);

    // and breaking normalization moves the top eigenvalue off 1
    a[0] += 0.25;
    CHECK(std::abs(level_values(HierParams(2, 6, Form::A, a)).back() - 1.0) > 1e-6);
}

TEST_CASE("noiseless weights accumulate no errors") {
    HierParams weights(2, 5, Form::A, {1, 0, 0, 0, 0, 0});
    for (int steps : {0, 3, 5, 10}) {
        const ExactMoments moments = exact_moments(weights, steps, {0, 1, 1, 0, 1});
        CHECK(moments.mean == Catch::Approx(0.0).margin(1e-14));
        CHECK(moments.variance == Catch::Approx(0.0).margin(1e-14));
    }
}

TEST_CASE("full-cycle moments are independent of the initial word") {
    for (int r : {6, 8}) {
        const NoiseModel model = boltzmann_model(2, r, 1.0);
        const HierParams weights = model.params();
        Xoshiro256 rng(113 + static_cast<std::uint64_t>(r), 0);
        std::vector<Word> initials = {Word(static_cast<std::size_t>(r), 0)};
        for (int k = 0; k < 2; ++k) {
            Word w(static_cast<std::size_t>(r));
            for (int& d : w) d = rng.uniform_below(2);
            initials.push_back(std::move(w));
        }

        const ExactMoments ref = exact_moments(weights, r, initials[0]);
        for (const Word& w0 : initials) {
            const ExactMoments m = exact_moments(weights, r, w0);
            CHECK(std::abs(m.mean - ref.mean) <= 1e-10);
            CHECK(std::abs(m.variance - ref.variance) <= 1e-10);
        }

        // and the whole k-distribution agrees, not just the moments
        const auto d0 = exact_k_distribution(weights, r, initials[0]);
        const auto d1 = exact_k_distribution(weights, r, initials[1]);
        REQUIRE(d0.size() == d1.size());
        for (std::size_t k = 0; k < d0.size(); ++k)
            CHECK(d0[k] == Catch::Approx(d1[k]).margin(1e-12));
    }
}

TEST_CASE("generator and direct moment routes agree against the closed forms") {
    const NoiseModel model = boltzmann_model(2, 8, 1.0);
    const ExactMoments exact = exact_moments(model.params(), 8, Word(8, 0));
    CHECK(std::abs(exact.mean - exact.mean_generator) <= 1e-10);
    CHECK(std::abs(exact.variance - exact.variance_generator) <= 1e-10);

    const MomentReport analytic = analytic_moments(model);
    CHECK(std::abs(exact.mean - analytic.mean) <= 1e-10);
    CHECK(std::abs(exact.variance - analytic.variance) <= 1e-10);
}

TEST_CASE("partial-cycle moments derotate before comparing") {
    const NoiseModel model = boltzmann_model(2, 6, 0.7);
    // a couple of steps: still well-defined and dual-route consistent
    const ExactMoments m = exact_moments(model.params(), 2, {1, 0, 0, 1, 1, 0});
    CHECK(m.mean > 0.0);
    CHECK(m.variance > 0.0);
    CHECK(std::abs(m.mean - m.mean_generator) <= 1e-10);
}

TEST_CASE("moment oracle rejects unsupported inputs") {
    CHECK_THROWS_AS(exact_moments(HierParams(3, 3, Form::A, {1, 0, 0, 0}), 3, {0, 0, 0}),
                    UnsupportedP);
    CHECK_THROWS_AS(exact_moments(HierParams(2, 3, Form::A, {0.5, 0.2, 0.2, 0.2}), 3, {0, 0, 0}),
                    NotNormalized);
    CHECK_THROWS_AS(exact_moments(HierParams(2, 3, Form::A, {1, 0, 0, 0}), -1, {0, 0, 0}),
                    InvalidArgument);
}
