#include "apv/median_inference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "apv/descriptive.hpp"
#include "apv/distributions.hpp"
#include "apv/error.hpp"

namespace apv {

const char* significance_code(Significance s) {
    switch (s) {
        case Significance::ns: return "NS";
        case Significance::p10: return "*";
        case Significance::p05: return "**";
        case Significance::p01: return "***";
    }
    return "NS";
}

Significance SignificanceThresholds::classify(double p) const {
    if (p < strong) return Significance::p01;
    if (p < medium) return Significance::p05;
    if (p < weak) return Significance::p10;
    return Significance::ns;
}

namespace {

void require_size(std::span<const double> sorted, const MedianSeEstimator& est) {
    if (sorted.size() < est.min_n()) {
        throw InsufficientData("median standard error needs n >= " + std::to_string(est.min_n()) +
                               ", got " + std::to_string(sorted.size()));
    }
}

// x(n-k+1) - x(k) for 1-based order-statistic index k.
double order_spread(std::span<const double> sorted, std::size_t k) {
    const std::size_t n = sorted.size();
    return sorted[n - k] - sorted[k - 1];
}

}  // namespace

double OrderStatisticSe::se(std::span<const double> sorted) const {
    require_size(sorted, *this);
    const double n = static_cast<double>(sorted.size());
    const double raw = std::round(n / 2.0 - kZ * std::sqrt(n) / 2.0);
    const auto k = static_cast<std::size_t>(std::clamp(raw, 1.0, std::floor(n / 2.0)));
    return order_spread(sorted, k) / (2.0 * kZ);
}

double BonettPriceSe::se(std::span<const double> sorted) const {
    require_size(sorted, *this);
    const std::size_t n = sorted.size();
    const double nd = static_cast<double>(n);
    const double raw = std::round((nd + 1.0) / 2.0 - std::sqrt(nd));
    const auto c = static_cast<std::size_t>(std::clamp(raw, 1.0, std::floor(nd / 2.0)));
    // P(Binomial(n, 1/2) <= c - 1) = I_{1/2}(n - c + 1, c)
    const double tail = dist::beta_inc(nd - static_cast<double>(c) + 1.0, static_cast<double>(c), 0.5);
    const double z = dist::normal_quantile(1.0 - tail);
    return order_spread(sorted, c) / (2.0 * z);
}

// The order-statistic rule rounds k to a wider interval than nominal at n near
// 100, which makes the two-sample test undersized; Bonett-Price stays calibrated.
const MedianSeEstimator& default_median_se() {
    static const BonettPriceSe instance;
    return instance;
}

const MedianSeEstimator& median_se_by_name(const std::string& name) {
    static const OrderStatisticSe order_statistic;
    if (name == "bonett-price" || name.empty()) return default_median_se();
    if (name == "order-statistic") return order_statistic;
    throw DomainError("unknown median se estimator '" + name + "'");
}

double median_se(std::span<const double> values, const MedianSeEstimator& estimator) {
    std::vector<double> sorted(values.begin(), values.end());
    std::stable_sort(sorted.begin(), sorted.end());
    return estimator.se(sorted);
}

MedianTestResult median_diff_test(std::span<const double> a, std::span<const double> b,
                                  const MedianSeEstimator& estimator,
                                  const SignificanceThresholds& thresholds) {
    std::vector<double> sa(a.begin(), a.end());
    std::vector<double> sb(b.begin(), b.end());
    std::stable_sort(sa.begin(), sa.end());
    std::stable_sort(sb.begin(), sb.end());

    MedianTestResult r;
    r.se_a = estimator.se(sa);
    r.se_b = estimator.se(sb);
    r.median_a = median_sorted(sa);
    r.median_b = median_sorted(sb);
    r.diff = r.median_a - r.median_b;
    r.se_diff = std::sqrt(r.se_a * r.se_a + r.se_b * r.se_b);

    if (r.se_diff == 0.0) {
        if (r.diff != 0.0) {
            throw DegenerateInference("medians differ but both samples have zero spread");
        }
        r.z = 0.0;
        r.p_two_sided = 1.0;
    } else {
        r.z = r.diff / r.se_diff;
        r.p_two_sided = std::min(1.0, 2.0 * dist::survival(dist::DistSpec::normal(), std::abs(r.z)));
    }
    r.code = thresholds.classify(r.p_two_sided);
    return r;
}

ComparisonMatrix pairwise_median_matrix(const std::vector<LabeledSample>& groups,
                                        const MedianSeEstimator& estimator,
                                        const SignificanceThresholds& thresholds) {
    ComparisonMatrix m;
    std::vector<const LabeledSample*> usable;
    for (const LabeledSample& g : groups) {
        if (g.second.size() < estimator.min_n()) {
            m.excluded.emplace_back(g.first, "fewer than " + std::to_string(estimator.min_n()) + " sales");
        } else {
            usable.push_back(&g);
        }
    }
    if (usable.size() < 2) throw InsufficientData("need >= 2 groups for a comparison matrix");

    std::vector<double> medians;
    for (const LabeledSample* g : usable) medians.push_back(median(g->second));
    std::vector<std::size_t> order(usable.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return medians[x] > medians[y]; });

    const std::size_t k = order.size();
    for (std::size_t idx : order) {
        m.labels.push_back(usable[idx]->first);
        m.medians.push_back(medians[idx]);
        m.counts.push_back(usable[idx]->second.size());
    }
    m.cells.assign(k, std::vector<std::optional<MedianTestResult>>(k));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            if (i == j) continue;
            try {
                m.cells[i][j] = median_diff_test(usable[order[j]]->second, usable[order[i]]->second,
                                                 estimator, thresholds);
            } catch (const DegenerateInference&) {
                // Both groups constant with different values: difference is
                // certain, reported with an infinite statistic.
                MedianTestResult r;
                r.median_a = m.medians[j];
                r.median_b = m.medians[i];
                r.diff = r.median_a - r.median_b;
                r.z = r.diff > 0 ? INFINITY : -INFINITY;
                r.p_two_sided = 0.0;
                r.code = thresholds.classify(0.0);
                m.cells[i][j] = r;
            }
        }
    }
    return m;
}

}  // namespace apv
