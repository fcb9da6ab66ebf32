#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "subedge/alias_table.hpp"
#include "subedge/rng.hpp"
#include "subedge/stats.hpp"

using namespace subedge;

namespace {
constexpr double kRelTol = 0x1.0p-40;

void check_encoding_matches(const std::vector<double>& weights) {
    const AliasTable t = AliasTable::build(weights);
    const std::vector<double> encoded = t.encoded_probabilities();
    long double total = 0.0L;
    for (double w : weights) total += w;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double expected = static_cast<double>(weights[i] / total);
        if (expected == 0.0) {
            CHECK(encoded[i] == 0.0);
        } else {
            CHECK(std::fabs(encoded[i] - expected) <= kRelTol * expected);
        }
    }
}
} // namespace

TEST_CASE("alias encoding matches normalized weights") {
    SUBCASE("simple normalization") {
        const AliasTable t = AliasTable::build({1.0, 1.0, 2.0});
        const auto p = t.encoded_probabilities();
        CHECK(std::fabs(p[0] - 0.25) <= kRelTol);
        CHECK(std::fabs(p[1] - 0.25) <= kRelTol);
        CHECK(std::fabs(p[2] - 0.5) <= kRelTol);
    }
    SUBCASE("singleton") {
        const AliasTable t = AliasTable::build({5.0});
        CHECK(t.encoded_probabilities()[0] == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("zero weight gets zero mass") {
        const AliasTable t = AliasTable::build({0.0, 3.0});
        const auto p = t.encoded_probabilities();
        CHECK(p[0] == 0.0);
        CHECK(p[1] == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("random weight vectors stay within 2^-40 relative") {
        Rng rng(20240818);
        for (int trial = 0; trial < 100; ++trial) {
            const std::size_t len = 1 + rng.below(64);
            std::vector<double> w(len);
            bool any = false;
            for (double& x : w) {
                if (rng.below(8) == 0) {
                    x = 0.0;
                } else {
                    // spread magnitudes over several orders
                    x = rng.next_double() * std::pow(10.0, static_cast<double>(rng.below(6)));
                    any = true;
                }
            }
            if (!any) w[0] = 1.0;
            check_encoding_matches(w);
        }
    }
}

TEST_CASE("alias input validation") {
    CHECK_THROWS_AS(AliasTable::build({}), std::invalid_argument);
    CHECK_THROWS_AS(AliasTable::build({0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(AliasTable::build({1.0, -0.5}), std::invalid_argument);
}

TEST_CASE("alias sampling") {
    SUBCASE("zero-weight item never appears") {
        const AliasTable t = AliasTable::build({1.0, 0.0});
        Rng rng(3);
        for (int i = 0; i < 100'000; ++i) CHECK(t.sample(rng) == 0);
    }
    SUBCASE("fixed seed gives identical draw sequences") {
        const AliasTable t = AliasTable::build({1.0, 2.0, 3.0, 4.0});
        Rng a(11), b(11);
        for (int i = 0; i < 1000; ++i) CHECK(t.sample(a) == t.sample(b));
    }
    SUBCASE("frequencies of [1,1,2] stay within 3 sigma over 1e6 draws") {
        const AliasTable t = AliasTable::build({1.0, 1.0, 2.0});
        Rng rng(20240819);
        constexpr std::uint64_t draws = 1'000'000;
        std::vector<std::uint64_t> counts(3, 0);
        for (std::uint64_t i = 0; i < draws; ++i) ++counts[t.sample(rng)];
        const double expected[] = {0.25, 0.25, 0.5};
        for (int i = 0; i < 3; ++i) {
            const double sigma = std::sqrt(expected[i] * (1 - expected[i]) / static_cast<double>(draws));
            CHECK(std::fabs(static_cast<double>(counts[i]) / draws - expected[i]) <= 3 * sigma);
        }
    }
}

TEST_CASE("alias draws pass chi-square goodness of fit") {
    Rng meta(424242);
    constexpr std::uint64_t draws = 1'000'000;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t len = 2 + meta.below(63);
        std::vector<double> w(len);
        double total = 0.0;
        for (double& x : w) {
            x = 0.05 + meta.next_double();
            total += x;
        }
        const AliasTable t = AliasTable::build(w);
        Rng rng(1000 + trial);
        std::vector<std::uint64_t> counts(len, 0);
        for (std::uint64_t i = 0; i < draws; ++i) ++counts[t.sample(rng)];
        std::vector<double> expected(len);
        for (std::size_t i = 0; i < len; ++i) expected[i] = w[i] / total * static_cast<double>(draws);
        const auto gof = stats::chi_square_gof(counts, expected);
        CHECK(gof.p_value > 0.001);
    }
}
