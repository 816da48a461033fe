#include <cmath>
#include <random>

#include "apv/distributions.hpp"
#include "apv/error.hpp"
#include "doctest.h"

using namespace apv::dist;

// Reference values computed with scipy.stats 1.15 and frozen here.

TEST_CASE("standard normal CDF at symmetry and reference points") {
    CHECK(cdf(DistSpec::normal(), 0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(std::abs(cdf(DistSpec::normal(), -3.1) - 0.0009676032132183563) < 1e-12);
    CHECK(std::abs(cdf(DistSpec::normal(), 1.96) - 0.9750021048517795) < 1e-12);
    CHECK(std::abs(cdf(DistSpec::normal(), 0.3) - 0.6179114221889526) < 1e-12);
}

TEST_CASE("chi-square(2) matches 1 - exp(-x/2) everywhere tested") {
    CHECK(std::abs(cdf(DistSpec::chi_square(2), 2.0) - (1.0 - std::exp(-1.0))) < 1e-12);
    for (double x = 0.0; x < 60.0; x += 0.173) {
        CHECK(std::abs(cdf(DistSpec::chi_square(2), x) - (-std::expm1(-x / 2.0))) < 1e-10);
        CHECK(std::abs(survival(DistSpec::chi_square(2), x) - std::exp(-x / 2.0)) < 1e-10);
    }
}

TEST_CASE("chi-square CDF at other degrees of freedom") {
    CHECK(std::abs(cdf(DistSpec::chi_square(1), 0.5) - 0.5204998778130466) < 1e-10);
    CHECK(std::abs(cdf(DistSpec::chi_square(3), 7.5) - 0.9424415480273636) < 1e-10);
    CHECK(std::abs(cdf(DistSpec::chi_square(10), 3.2) - 0.02368227804931168) < 1e-10);
    CHECK(std::abs(cdf(DistSpec::chi_square(25), 40.0) - 0.9708356043768479) < 1e-10);
    CHECK(std::abs(survival(DistSpec::chi_square(4), 60.0) - 2.9008631203404573e-12) < 1e-20);
    CHECK(cdf(DistSpec::chi_square(3), -1.0) == 0.0);
}

TEST_CASE("student t CDF") {
    for (double df : {1.0, 2.0, 7.0, 30.0, 1000.0}) {
        CHECK(cdf(DistSpec::student_t(df), 0.0) == doctest::Approx(0.5).epsilon(1e-15));
    }
    CHECK(std::abs(cdf(DistSpec::student_t(1), 1.0) - 0.75) < 1e-12);
    CHECK(std::abs(cdf(DistSpec::student_t(5), -2.3) - 0.03488623466601864) < 1e-10);
    CHECK(std::abs(cdf(DistSpec::student_t(30), 1.7) - 0.9502610622057416) < 1e-10);
    CHECK(std::abs(cdf(DistSpec::student_t(3), 0.4) - 0.6420324230128149) < 1e-10);
}

TEST_CASE("Fisher F CDF") {
    CHECK(std::abs(cdf(DistSpec::fisher_f(3, 20), 2.5) - 0.9111562480623108) < 1e-10);
    CHECK(std::abs(cdf(DistSpec::fisher_f(10, 1000), 1.2) - 0.7133468355290493) < 1e-10);
    CHECK(std::abs(cdf(DistSpec::fisher_f(1, 5), 6.6) - 0.9499067484947413) < 1e-10);
    CHECK(std::abs(cdf(DistSpec::fisher_f(25, 1500), 1.0) - 0.5367010291854383) < 1e-10);
}

TEST_CASE("incomplete gamma and beta primitives") {
    CHECK(std::abs(beta_inc(2.5, 3.5, 0.4) - 0.4869041915261176) < 1e-12);
    CHECK(std::abs(gamma_p(4.5, 2.0) - 0.08858747316832083) < 1e-12);
    CHECK(std::abs(gamma_p(4.5, 2.0) + gamma_q(4.5, 2.0) - 1.0) < 1e-14);
}

TEST_CASE("normal quantile inverts the CDF") {
    CHECK(std::abs(normal_quantile(0.975) - 1.959963984540054) < 1e-10);
    CHECK(std::abs(normal_quantile(0.995) - 2.5758293035489004) < 1e-10);
    CHECK(std::abs(normal_quantile(1e-8) - -5.612001244174789) < 1e-8);
    CHECK(std::abs(normal_quantile(0.3) - -0.5244005127080409) < 1e-10);
    CHECK_THROWS_AS((void)normal_quantile(0.0), apv::DomainError);
}

TEST_CASE("CDFs are monotone and bounded") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> xs(-20.0, 80.0);
    const DistSpec specs[] = {DistSpec::normal(), DistSpec::chi_square(1), DistSpec::chi_square(7.5),
                              DistSpec::student_t(2), DistSpec::student_t(40), DistSpec::fisher_f(4, 9),
                              DistSpec::fisher_f(30, 300)};
    for (const DistSpec& spec : specs) {
        for (int i = 0; i < 300; ++i) {
            double a = xs(rng), b = xs(rng);
            if (a > b) std::swap(a, b);
            const double fa = cdf(spec, a), fb = cdf(spec, b);
            CHECK(fa >= 0.0);
            CHECK(fb <= 1.0);
            CHECK(fa <= fb + 1e-15);
            CHECK(std::abs(fa + survival(spec, a) - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("invalid degrees of freedom are domain errors") {
    CHECK_THROWS_AS((void)cdf(DistSpec::chi_square(0), 1.0), apv::DomainError);
    CHECK_THROWS_AS((void)cdf(DistSpec::student_t(-1), 1.0), apv::DomainError);
    CHECK_THROWS_AS((void)cdf(DistSpec::fisher_f(3, 0), 1.0), apv::DomainError);
    CHECK_THROWS_AS((void)cdf(DistSpec::normal(), NAN), apv::DomainError);
}
