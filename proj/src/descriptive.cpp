#include "apv/descriptive.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "apv/distributions.hpp"
#include "apv/error.hpp"

namespace apv {

double apv(double real_price, double height_cm, double width_cm) {
    if (!(real_price > 0.0) || !(height_cm > 0.0) || !(width_cm > 0.0)) {
        throw DomainError("apv: price, height and width must be positive");
    }
    return real_price / (height_cm * width_cm);
}

double mean(std::span<const double> values) {
    if (values.empty()) throw InsufficientData("mean of an empty sample");
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

double sample_sd(std::span<const double> values) {
    if (values.size() < 2) throw InsufficientData("standard deviation needs n >= 2");
    const double m = mean(values);
    double ss = 0.0;
    for (double v : values) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double median_sorted(std::span<const double> sorted) {
    if (sorted.empty()) throw InsufficientData("median of an empty sample");
    const std::size_t n = sorted.size();
    if (n % 2 == 1) return sorted[n / 2];
    return 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

double median(std::span<const double> values) {
    std::vector<double> copy(values.begin(), values.end());
    std::sort(copy.begin(), copy.end());
    return median_sorted(copy);
}

double jarque_bera(double n, double skewness, double excess_kurtosis) {
    return n / 6.0 * (skewness * skewness + 0.25 * excess_kurtosis * excess_kurtosis);
}

SummaryStats describe(std::span<const double> values) {
    SummaryStats s;
    s.n = values.size();
    s.mean = mean(values);
    s.median = median(values);

    const double n = static_cast<double>(s.n);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : values) {
        const double d = v - s.mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;

    const bool all_equal = std::all_of(values.begin(), values.end(),
                                       [&](double v) { return v == values.front(); });
    s.degenerate = all_equal;

    if (s.n >= 2) {
        s.sd = sample_sd(values);
        if (s.mean != 0.0) s.cv = *s.sd / s.mean;
        if (!all_equal && m2 > 0.0) {
            s.skewness = m3 / std::pow(m2, 1.5);
            s.excess_kurtosis = m4 / (m2 * m2) - 3.0;
            s.jb = jarque_bera(n, *s.skewness, *s.excess_kurtosis);
            s.jb_p = dist::survival(dist::DistSpec::chi_square(2.0), *s.jb);
        }
    }
    return s;
}

}  // namespace apv
