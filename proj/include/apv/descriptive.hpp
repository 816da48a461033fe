#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace apv {

/**
 * @brief Artistic Power Value: real price per square centimetre.
 * @throws DomainError if any argument is not strictly positive.
 */
[[nodiscard]] double apv(double real_price, double height_cm, double width_cm);

/// Descriptive block for an APV sample.
///
/// Moment statistics use 1/n central moments: skewness g1 = m3/m2^1.5 and
/// excess kurtosis g2 = m4/m2^2 - 3. The standard deviation uses the n-1
/// sample convention. Jarque-Bera is (n/6)(g1^2 + g2^2/4), referred to a
/// chi-square with 2 degrees of freedom.
struct SummaryStats {
    std::size_t n = 0;
    double mean = 0.0;
    double median = 0.0;
    std::optional<double> sd;
    std::optional<double> cv;
    std::optional<double> skewness;
    std::optional<double> excess_kurtosis;
    std::optional<double> jb;
    std::optional<double> jb_p;
    bool degenerate = false;  ///< all values equal, shape statistics undefined
};

[[nodiscard]] SummaryStats describe(std::span<const double> values);

/// Jarque-Bera statistic from sample size, skewness and excess kurtosis.
[[nodiscard]] double jarque_bera(double n, double skewness, double excess_kurtosis);

[[nodiscard]] double mean(std::span<const double> values);

/// Sample standard deviation (n-1 denominator); requires n >= 2.
[[nodiscard]] double sample_sd(std::span<const double> values);

/// Median; the two central order statistics are averaged for even n.
[[nodiscard]] double median(std::span<const double> values);

/// Median of data already sorted ascending.
[[nodiscard]] double median_sorted(std::span<const double> sorted);

}  // namespace apv
