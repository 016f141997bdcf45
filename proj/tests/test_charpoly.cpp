#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "ewenspoly/charpoly.hpp"
#include "ewenspoly/measure.hpp"
#include "ewenspoly/rng.hpp"
#include "test_util.hpp"

using namespace ewenspoly;

namespace {

CycleType make_type(std::int64_t n, std::vector<std::pair<std::int64_t, std::int64_t>> parts) {
    CycleType ct;
    ct.n = n;
    ct.counts.assign(static_cast<std::size_t>(n), 0);
    for (auto [k, c] : parts) ct.counts[static_cast<std::size_t>(k) - 1] = c;
    return ct;
}

CycleType random_type(std::int64_t n, SplitMix64& rng) {
    CycleType ct;
    ct.n = n;
    ct.counts.assign(static_cast<std::size_t>(n), 0);
    std::int64_t left = n;
    while (left > 0) {
        auto k = 1 + static_cast<std::int64_t>(rng.next_unit() * static_cast<double>(left));
        k = std::min(k, left);
        ++ct.counts[static_cast<std::size_t>(k) - 1];
        left -= k;
    }
    return ct;
}

cdouble horner(const std::vector<cdouble>& coeffs, cdouble z) {
    cdouble acc(0.0, 0.0);
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * z + coeffs[i];
    return acc;
}

}  // namespace

TEST_CASE("characteristic polynomial values, hand checked") {
    REQUIRE(eval_charpoly(make_type(4, {{1, 4}}), cdouble(0.0, 0.0)).value == cdouble(1.0, 0.0));
    REQUIRE(eval_charpoly(make_type(3, {{3, 1}}), cdouble(0.5, 0.0)).value.real() ==
            Catch::Approx(0.875).epsilon(1e-13));
    REQUIRE(eval_charpoly(make_type(3, {{1, 1}, {2, 1}}), cdouble(0.5, 0.0)).value.real() ==
            Catch::Approx(0.375).epsilon(1e-13));
}

TEST_CASE("value equals the determinant of I - zA") {
    SplitMix64 rng(404);
    std::vector<cdouble> zs = {{0.5, 0.0}, {-0.4, 0.3}, {0.0, 0.8}};
    for (int trial = 0; trial < 60; ++trial) {
        auto n = 1 + static_cast<std::int64_t>(rng.next_unit() * 8.0);
        auto ct = random_type(n, rng);
        auto perm = to_permutation(ct);
        for (cdouble z : zs) {
            cdouble expect = test_util::det_i_minus_z_perm(perm, z);
            cdouble got = eval_charpoly(ct, z).value;
            REQUIRE(std::abs(got - expect) < 1e-10 * (1.0 + std::abs(expect)));
        }
    }
}

TEST_CASE("log accumulation is consistent and nonvanishing") {
    SplitMix64 rng(405);
    for (int trial = 0; trial < 50; ++trial) {
        auto ct = random_type(30, rng);
        cdouble z(1.9 * rng.next_unit() - 0.95, 0.0);
        z += cdouble(0.0, (0.95 - std::abs(z.real())) * (2.0 * rng.next_unit() - 1.0));
        auto e = eval_charpoly(ct, z);
        REQUIRE(std::abs(e.value) > 0.0);
        REQUIRE(std::abs(std::exp(e.log_value) - e.value) < 1e-10 * std::abs(e.value));
    }
}

TEST_CASE("evaluation requires |z| < 1") {
    auto ct = make_type(2, {{2, 1}});
    REQUIRE_THROWS_AS(eval_charpoly(ct, cdouble(1.0, 0.0)), std::domain_error);
    REQUIRE_THROWS_AS(eval_charpoly(ct, cdouble(0.0, 1.0)), std::domain_error);
    REQUIRE_THROWS_AS(log_charpoly_from_cycles({2}, cdouble(0.0, 1.0)), std::domain_error);
}

TEST_CASE("cycle driven evaluation matches the dense one") {
    SplitMix64 rng(406);
    for (int trial = 0; trial < 20; ++trial) {
        auto ct = random_type(25, rng);
        std::vector<std::int64_t> lengths;
        for (std::int64_t k = 1; k <= ct.n; ++k) {
            for (std::int64_t c = 0; c < ct.counts[static_cast<std::size_t>(k) - 1]; ++c) lengths.push_back(k);
        }
        cdouble z(0.3, 0.4);
        REQUIRE(std::abs(log_charpoly_from_cycles(lengths, z) - eval_charpoly(ct, z).log_value) < 1e-12);
    }
}

TEST_CASE("traces by divisor sums, hand checked") {
    auto id4 = make_type(4, {{1, 4}});
    auto t = traces(id4, 6);
    for (auto v : t) REQUIRE(v == 4);
    auto mixed = traces(make_type(3, {{1, 1}, {2, 1}}), 2);
    REQUIRE(mixed[0] == 1);
    REQUIRE(mixed[1] == 3);
    auto c3 = traces(make_type(3, {{3, 1}}), 3);
    REQUIRE(c3 == std::vector<std::int64_t>{0, 0, 3});
}

TEST_CASE("traces count fixed points of permutation powers") {
    SplitMix64 rng(407);
    for (int trial = 0; trial < 40; ++trial) {
        auto n = 1 + static_cast<std::int64_t>(rng.next_unit() * 10.0);
        auto ct = random_type(n, rng);
        auto perm = to_permutation(ct);
        auto t = traces(ct, 12);
        for (std::int64_t k = 1; k <= 12; ++k) {
            REQUIRE(t[static_cast<std::size_t>(k) - 1] == test_util::fixed_points_of_power(perm, k));
        }
    }
}

TEST_CASE("secular coefficients, hand checked") {
    auto two_cycle = secular_coeffs(make_type(2, {{2, 1}}), 2);
    REQUIRE(two_cycle[0] == cdouble(1.0, 0.0));
    REQUIRE(std::abs(two_cycle[1]) < 1e-14);
    REQUIRE(std::abs(two_cycle[2] - cdouble(-1.0, 0.0)) < 1e-14);
    // (1-z)(1-z^2) = 1 - z - z^2 + z^3
    auto mixed = secular_coeffs(make_type(3, {{1, 1}, {2, 1}}), 3);
    std::vector<double> expect = {1.0, -1.0, -1.0, 1.0};
    for (std::size_t i = 0; i < expect.size(); ++i) {
        REQUIRE(std::abs(mixed[i] - cdouble(expect[i], 0.0)) < 1e-13);
    }
}

TEST_CASE("secular coefficients match the integer expansion") {
    SplitMix64 rng(408);
    for (int trial = 0; trial < 60; ++trial) {
        auto n = 1 + static_cast<std::int64_t>(rng.next_unit() * 29.0);
        auto ct = random_type(n, rng);
        auto xi = secular_coeffs(ct, n);
        auto expect = test_util::poly_expand(ct.counts, n);
        for (std::int64_t k = 0; k <= n; ++k) {
            double e = static_cast<double>(expect[static_cast<std::size_t>(k)]);
            REQUIRE(std::abs(xi[static_cast<std::size_t>(k)] - cdouble(e, 0.0)) <=
                    1e-8 * std::max(1.0, std::abs(e)));
        }
        // prefix request must agree with the full expansion too
        auto partial = secular_coeffs(ct, n / 2);
        for (std::int64_t k = 0; k <= n / 2; ++k) {
            REQUIRE(std::abs(partial[static_cast<std::size_t>(k)] - xi[static_cast<std::size_t>(k)]) < 1e-9);
        }
    }
}

TEST_CASE("secular polynomial evaluates to the product form") {
    SplitMix64 rng(409);
    for (int trial = 0; trial < 500; ++trial) {
        auto n = 1 + static_cast<std::int64_t>(rng.next_unit() * 49.0);
        auto ct = random_type(n, rng);
        auto xi = secular_coeffs(ct, n);
        for (int zz = 0; zz < 5; ++zz) {
            double radius = 0.9 * rng.next_unit();
            double angle = 2.0 * M_PI * rng.next_unit();
            cdouble z = radius * std::exp(cdouble(0.0, angle));
            cdouble direct = eval_charpoly(ct, z).value;
            cdouble viapoly = horner(xi, z);
            REQUIRE(std::abs(viapoly - direct) <= 1e-8 * (1.0 + std::abs(direct)));
        }
    }
}

TEST_CASE("secular coefficient range checks") {
    auto ct = make_type(4, {{4, 1}});
    REQUIRE_THROWS_AS(secular_coeffs(ct, 5), std::out_of_range);
    REQUIRE_THROWS_AS(secular_coeffs(ct, -1), std::out_of_range);
    REQUIRE(secular_coeffs(ct, 0).size() == 1);
}
