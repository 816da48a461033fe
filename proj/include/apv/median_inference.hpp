#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace apv {

enum class Significance { ns, p10, p05, p01 };

/// "NS", "*", "**", "***".
[[nodiscard]] const char* significance_code(Significance s);

/// p < strong -> ***, else p < medium -> **, else p < weak -> *, else NS.
struct SignificanceThresholds {
    double strong = 0.01;
    double medium = 0.05;
    double weak = 0.10;

    [[nodiscard]] Significance classify(double p) const;
};

/// Standard error of a sample median from a spread of order statistics.
class MedianSeEstimator {
public:
    virtual ~MedianSeEstimator() = default;
    /// `sorted` must be ascending with at least min_n() values.
    [[nodiscard]] virtual double se(std::span<const double> sorted) const = 0;
    [[nodiscard]] virtual std::string name() const = 0;
    [[nodiscard]] virtual std::size_t min_n() const { return 5; }
};

/// Order-statistic estimator: k = clamp(round(n/2 - z*sqrt(n)/2), 1, n/2) with
/// z = 2.575829 and se = (x(n-k+1) - x(k)) / (2z).
class OrderStatisticSe final : public MedianSeEstimator {
public:
    static constexpr double kZ = 2.575829;
    [[nodiscard]] double se(std::span<const double> sorted) const override;
    [[nodiscard]] std::string name() const override { return "order-statistic"; }
};

/// Default estimator (Bonett-Price): c = round((n+1)/2 - sqrt(n)), and z chosen so the
/// exact binomial coverage of [x(c), x(n-c+1)] matches a normal interval.
class BonettPriceSe final : public MedianSeEstimator {
public:
    [[nodiscard]] double se(std::span<const double> sorted) const override;
    [[nodiscard]] std::string name() const override { return "bonett-price"; }
};

[[nodiscard]] const MedianSeEstimator& default_median_se();

/// Looks up "order-statistic" or "bonett-price"; throws DomainError.
[[nodiscard]] const MedianSeEstimator& median_se_by_name(const std::string& name);

/// Throws InsufficientData when n < estimator.min_n(). Input need not be sorted.
[[nodiscard]] double median_se(std::span<const double> values,
                               const MedianSeEstimator& estimator = default_median_se());

struct MedianTestResult {
    double median_a = 0.0;
    double median_b = 0.0;
    double diff = 0.0;  ///< median_a - median_b
    double se_a = 0.0;
    double se_b = 0.0;
    double se_diff = 0.0;
    double z = 0.0;
    double p_two_sided = 1.0;
    Significance code = Significance::ns;
};

/// Two-sample test of equal medians, z = (Ma - Mb) / sqrt(se_a^2 + se_b^2).
/// Zero pooled se with equal medians gives p = 1; with different medians it
/// throws DegenerateInference.
[[nodiscard]] MedianTestResult median_diff_test(
    std::span<const double> a, std::span<const double> b,
    const MedianSeEstimator& estimator = default_median_se(),
    const SignificanceThresholds& thresholds = {});

/// All-pairs comparison. Labels are ordered by descending median; cell (i, j)
/// tests group j against group i, so its diff is median_j - median_i.
struct ComparisonMatrix {
    std::vector<std::string> labels;
    std::vector<double> medians;
    std::vector<std::size_t> counts;
    std::vector<std::vector<std::optional<MedianTestResult>>> cells;  ///< empty on the diagonal
    std::vector<std::pair<std::string, std::string>> excluded;        ///< (label, reason)

    [[nodiscard]] const MedianTestResult& at(std::size_t i, std::size_t j) const { return *cells[i][j]; }
};

using LabeledSample = std::pair<std::string, std::vector<double>>;

/// Groups failing the estimator's size requirement are excluded with a
/// reason. Throws InsufficientData when fewer than two groups remain.
[[nodiscard]] ComparisonMatrix pairwise_median_matrix(
    const std::vector<LabeledSample>& groups,
    const MedianSeEstimator& estimator = default_median_se(),
    const SignificanceThresholds& thresholds = {});

}  // namespace apv
