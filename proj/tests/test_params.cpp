#include <catch_amalgamated.hpp>

#include <cmath>

#include "hiermat/params.hpp"
#include "hiermat/rng.hpp"

using namespace hiermat;

namespace {

std::vector<double> random_coeffs(Xoshiro256& rng, int r, double lo = 0.1, double hi = 1.0) {
    std::vector<double> a(static_cast<std::size_t>(r) + 1);
    for (double& x : a) x = lo + (hi - lo) * rng.uniform();
    return a;
}

double max_rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double scale = std::max({1.0, std::abs(a[i]), std::abs(b[i])});
        worst = std::max(worst, std::abs(a[i] - b[i]) / scale);
    }
    return worst;
}

} // namespace

TEST_CASE("identity operator maps to q_0 = 1 with vanishing off-diagonals") {
    HierParams params(2, 3, Form::A, {1.0, 0.0, 0.0, 0.0});
    const HierParams q = convert_coeffs(params, Form::Q);
    REQUIRE(q.form == Form::Q);
    CHECK(q.coeffs[0] == Catch::Approx(1.0));
    for (std::size_t g = 1; g < q.coeffs.size(); ++g)
        CHECK(q.coeffs[g] == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("a-to-q follows the tail-sum rule and inverts exactly") {
    // direct evaluation of both connection formulas at p=2, r=3
    const std::vector<double> a = {0.7, 0.4, 0.9, 0.3};
    HierParams params(2, 3, Form::A, a);
    const HierParams q = convert_coeffs(params, Form::Q);

    for (int gamma = 0; gamma <= 3; ++gamma) {
        double expected = 0.0;
        for (int mu = gamma; mu <= 3; ++mu)
            expected += a[static_cast<std::size_t>(mu)] * std::pow(2.0, -mu);
        CHECK(q.coeffs[static_cast<std::size_t>(gamma)] == Catch::Approx(expected));
    }
    CHECK(q.coeffs[3] == Catch::Approx(a[3] * std::pow(2.0, -3)));

    const HierParams back = convert_coeffs(q, Form::A);
    CHECK(max_rel_diff(back.coeffs, a) < 1e-12);
}

TEST_CASE("round-trips through every form are stable on random inputs") {
    Xoshiro256 rng(2024, 0);
    for (int p : {2, 3}) {
        for (int r : {1, 3, 5}) {
            for (int rep = 0; rep < 20; ++rep) {
                const std::vector<double> a = random_coeffs(rng, r);
                const HierParams base(p, r, Form::A, a);
                for (Form target : {Form::Q, Form::B, Form::C}) {
                    const HierParams there = convert_coeffs(base, target);
                    const HierParams back = convert_coeffs(there, Form::A);
                    INFO("p=" << p << " r=" << r << " target=" << to_string(target));
                    CHECK(max_rel_diff(back.coeffs, a) < 1e-12);
                }
                // chained: Q -> C -> B -> Q
                const HierParams q0 = convert_coeffs(base, Form::Q);
                const HierParams chained =
                    convert_coeffs(convert_coeffs(convert_coeffs(q0, Form::C), Form::B), Form::Q);
                CHECK(max_rel_diff(chained.coeffs, q0.coeffs) < 1e-12);
            }
        }
    }
}

TEST_CASE("degenerate conversions raise instead of producing infinities") {
    SECTION("zero partial sum blocks the b-form") {
        HierParams params(2, 2, Form::A, {0.0, 0.5, 0.5});
        CHECK_THROWS_AS(convert_coeffs(params, Form::B), DegenerateConversion);
    }
    SECTION("b <= -1 blocks the c-form") {
        // a_0 = 0.5 gives b_0 = -0.5 (fine); a_1/a_0 = -3 gives b_1 = -3
        HierParams params(2, 1, Form::A, {0.5, -1.5});
        CHECK_THROWS_AS(convert_coeffs(params, Form::C), DegenerateConversion);
        CHECK_NOTHROW(convert_coeffs(params, Form::B));
    }
}

TEST_CASE("parameter validation rejects malformed input") {
    CHECK_THROWS_AS(HierParams(1, 3, Form::A, {1, 0, 0, 0}), InvalidParams);
    CHECK_THROWS_AS(HierParams(2, 0, Form::A, {1}), InvalidParams);
    CHECK_THROWS_AS(HierParams(2, 3, Form::A, {1, 0, 0}), InvalidParams);
    CHECK_NOTHROW(HierParams(2, 3, Form::A, {1, 0, 0, 0}));
    CHECK(HierParams(3, 4, Form::A, {1, 0, 0, 0, 0}).dimension() == 81);
}

TEST_CASE("level values are the cumulative coefficient sums in any form") {
    const std::vector<double> a = {0.4, 0.3, 0.2, 0.1};
    const HierParams base(2, 3, Form::A, a);
    const std::vector<double> expected = {0.4, 0.7, 0.9, 1.0};

    for (Form f : {Form::A, Form::Q, Form::B, Form::C}) {
        const std::vector<double> lambda = level_values(convert_coeffs(base, f));
        REQUIRE(lambda.size() == expected.size());
        for (std::size_t i = 0; i < expected.size(); ++i)
            CHECK(lambda[i] == Catch::Approx(expected[i]).margin(1e-13));
    }
}
