#include <algorithm>
#include <cmath>
#include <random>

#include "apv/descriptive.hpp"
#include "apv/error.hpp"
#include "apv/median_inference.hpp"
#include "doctest.h"
#include "generators.hpp"

using namespace apv;

TEST_CASE("significance coding follows the thresholds") {
    const SignificanceThresholds t;
    CHECK(t.classify(0.009) == Significance::p01);
    CHECK(t.classify(0.01) == Significance::p05);
    CHECK(t.classify(0.049) == Significance::p05);
    CHECK(t.classify(0.05) == Significance::p10);
    CHECK(t.classify(0.0999) == Significance::p10);
    CHECK(t.classify(0.10) == Significance::ns);
    CHECK(std::string(significance_code(Significance::p01)) == "***");
    CHECK(std::string(significance_code(Significance::ns)) == "NS");
}

TEST_CASE("median se of a constant sample is zero") {
    CHECK(median_se(std::vector<double>(8, 5.0)) == 0.0);
    CHECK(median_se(std::vector<double>(8, 5.0), BonettPriceSe{}) == 0.0);
}

TEST_CASE("default estimator is Bonett-Price") {
    CHECK(default_median_se().name() == "bonett-price");
    CHECK(&median_se_by_name("") == &default_median_se());
    CHECK(median_se_by_name("order-statistic").name() == "order-statistic");
}

TEST_CASE("median se needs at least five values") {
    CHECK_THROWS_AS((void)median_se(std::vector<double>{1, 2, 3, 4}), InsufficientData);
    CHECK_NOTHROW((void)median_se(std::vector<double>{1, 2, 3, 4, 5}));
}

TEST_CASE("order-statistic index for known n") {
    // n = 100: k = round(50 - 2.575829 * 5) = round(37.12) = 37
    std::vector<double> x(100);
    for (int i = 0; i < 100; ++i) x[static_cast<std::size_t>(i)] = i + 1;
    CHECK(median_se(x, OrderStatisticSe{}) == doctest::Approx((64.0 - 37.0) / (2.0 * 2.575829)));
    // n = 5: round(2.5 - 2.88) = 0 clamps to 1
    CHECK(median_se(std::vector<double>{1, 2, 3, 4, 5}, OrderStatisticSe{}) == doctest::Approx(4.0 / (2.0 * 2.575829)));
}

TEST_CASE("median se is location invariant and scale equivariant") {
    testing::Rng rng(21);
    for (int rep = 0; rep < 100; ++rep) {
        const auto x = testing::lognormal_sample(rng, 5 + static_cast<std::size_t>(rep), 3.0, 1.0);
        std::vector<double> shifted, scaled;
        for (double v : x) {
            shifted.push_back(v + 10.0);
            scaled.push_back(v * 3.5);
        }
        for (const MedianSeEstimator* est :
             {&median_se_by_name("order-statistic"), &median_se_by_name("bonett-price")}) {
            CHECK(median_se(shifted, *est) == doctest::Approx(median_se(x, *est)).epsilon(1e-12));
            CHECK(median_se(scaled, *est) == doctest::Approx(3.5 * median_se(x, *est)).epsilon(1e-12));
        }
    }
}

TEST_CASE("median se tracks the Monte Carlo spread of lognormal medians") {
    // 10000 replicates of n = 200 from lognormal(0, 1).
    testing::Rng rng(2024);
    constexpr int kReps = 10000;
    for (const MedianSeEstimator* est : {&median_se_by_name("order-statistic"), &median_se_by_name("bonett-price")}) {
        std::vector<double> medians, ses;
        for (int r = 0; r < kReps; ++r) {
            const auto x = testing::lognormal_sample(rng, 200, 0.0, 1.0);
            medians.push_back(median(x));
            ses.push_back(median_se(x, *est));
        }
        const double empirical = sample_sd(medians);
        const double estimated = mean(ses);
        INFO(est->name(), " empirical ", empirical, " estimated ", estimated);
        CHECK(std::abs(estimated / empirical - 1.0) < 0.15);
    }
}

TEST_CASE("median difference test: identity and antisymmetry") {
    testing::Rng rng(31);
    const auto a = testing::lognormal_sample(rng, 60, 5.0, 0.8);
    const auto b = testing::lognormal_sample(rng, 45, 5.2, 0.8);

    const auto same = median_diff_test(a, a);
    CHECK(same.diff == 0.0);
    CHECK(same.z == 0.0);
    CHECK(same.p_two_sided == 1.0);
    CHECK(same.code == Significance::ns);

    const auto ab = median_diff_test(a, b);
    const auto ba = median_diff_test(b, a);
    CHECK(ab.diff == -ba.diff);
    CHECK(ab.z == -ba.z);
    CHECK(ab.p_two_sided == ba.p_two_sided);
    CHECK(ab.se_diff >= 0.0);
}

TEST_CASE("median difference test: location and scale equivariance") {
    testing::Rng rng(41);
    for (int rep = 0; rep < 50; ++rep) {
        const auto a = testing::lognormal_sample(rng, 40, 5.0, 0.7);
        const auto b = testing::lognormal_sample(rng, 55, 5.1, 0.7);
        const auto base = median_diff_test(a, b);
        std::vector<double> as, bs, ac, bc;
        for (double v : a) {
            as.push_back(2.5 * v);
            ac.push_back(v + 100.0);
        }
        for (double v : b) {
            bs.push_back(2.5 * v);
            bc.push_back(v + 100.0);
        }
        const auto scaled = median_diff_test(as, bs);
        CHECK(scaled.diff == doctest::Approx(2.5 * base.diff).epsilon(1e-9));
        CHECK(scaled.se_diff == doctest::Approx(2.5 * base.se_diff).epsilon(1e-9));
        CHECK(scaled.z == doctest::Approx(base.z).epsilon(1e-9));
        CHECK(scaled.p_two_sided == doctest::Approx(base.p_two_sided).epsilon(1e-9));
        CHECK(scaled.code == base.code);

        const auto shifted = median_diff_test(ac, bc);
        CHECK(shifted.diff == doctest::Approx(base.diff).epsilon(1e-9));
        CHECK(shifted.z == doctest::Approx(base.z).epsilon(1e-9));
        CHECK(shifted.code == base.code);
    }
}

TEST_CASE("degenerate zero-spread comparison") {
    const std::vector<double> a(6, 3.0), b(6, 4.0);
    CHECK_THROWS_AS((void)median_diff_test(a, b), DegenerateInference);
    CHECK(median_diff_test(a, a).p_two_sided == 1.0);
}

TEST_CASE("type-I error near nominal under equal lognormal medians") {
    testing::Rng rng(77);
    int rejections = 0;
    constexpr int kReps = 2000;
    for (int r = 0; r < kReps; ++r) {
        const auto a = testing::lognormal_sample(rng, 100, 5.0, 1.0);
        const auto b = testing::lognormal_sample(rng, 100, 5.0, 1.0);
        if (median_diff_test(a, b).p_two_sided < 0.05) ++rejections;
    }
    const double rate = static_cast<double>(rejections) / kReps;
    CHECK(rate > 0.025);
    CHECK(rate < 0.075);
}

namespace {

std::vector<double> group_with_median(double m, std::size_t n = 9) {
    std::vector<double> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(m + (static_cast<double>(i) - static_cast<double>(n / 2)));
    return out;
}

}  // namespace

TEST_CASE("pairwise matrix orders by descending median and stores j minus i") {
    const std::vector<LabeledSample> groups{
        {"low", group_with_median(10)}, {"high", group_with_median(30)}, {"mid", group_with_median(20)}};
    const auto m = pairwise_median_matrix(groups);
    REQUIRE(m.labels == std::vector<std::string>{"high", "mid", "low"});
    CHECK(m.medians == std::vector<double>{30, 20, 10});
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK_FALSE(m.cells[i][i]);
        for (std::size_t j = 0; j < 3; ++j) {
            if (i == j) continue;
            CHECK(m.at(i, j).diff == m.medians[j] - m.medians[i]);
        }
    }
}

TEST_CASE("matrix with medians 513 and 202 gives 311") {
    const auto m = pairwise_median_matrix({{"Matisse", group_with_median(513)}, {"Signac", group_with_median(202)}});
    CHECK(m.at(1, 0).diff == 311.0);
}

TEST_CASE("same sample under two labels is not significant") {
    testing::Rng rng(5);
    const auto x = testing::lognormal_sample(rng, 50, 5.0, 1.0);
    const auto m = pairwise_median_matrix({{"a", x}, {"b", x}});
    CHECK(m.at(0, 1).diff == 0.0);
    CHECK(m.at(0, 1).code == Significance::ns);
}

TEST_CASE("small groups are excluded; fewer than two usable groups is an error") {
    const auto m = pairwise_median_matrix(
        {{"a", group_with_median(10)}, {"b", group_with_median(20)}, {"tiny", {1, 2, 3}}});
    CHECK(m.labels.size() == 2);
    REQUIRE(m.excluded.size() == 1);
    CHECK(m.excluded[0].first == "tiny");
    CHECK_THROWS_AS((void)pairwise_median_matrix({{"a", group_with_median(10)}}), InsufficientData);
}
