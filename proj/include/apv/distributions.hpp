#pragma once

namespace apv::dist {

enum class Family { standard_normal, chi_square, student_t, fisher_f };

/// A reference distribution for p-value computation.
struct DistSpec {
    Family family = Family::standard_normal;
    double df1 = 0.0;
    double df2 = 0.0;

    static DistSpec normal() { return {}; }
    static DistSpec chi_square(double df) { return {Family::chi_square, df, 0.0}; }
    static DistSpec student_t(double df) { return {Family::student_t, df, 0.0}; }
    static DistSpec fisher_f(double df1, double df2) { return {Family::fisher_f, df1, df2}; }
};

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
[[nodiscard]] double gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), computed directly.
[[nodiscard]] double gamma_q(double a, double x);

/// Regularized incomplete beta I_x(a, b), a, b > 0, x in [0, 1].
[[nodiscard]] double beta_inc(double a, double b, double x);

[[nodiscard]] double normal_cdf(double x);

/// Inverse of the standard normal CDF, p in (0, 1).
[[nodiscard]] double normal_quantile(double p);

/**
 * @brief P(X <= x) for the given distribution.
 *
 * Absolute error is below 1e-10 over the supported range. Throws
 * DomainError for non-positive degrees of freedom or non-finite x.
 */
[[nodiscard]] double cdf(const DistSpec& spec, double x);

/// P(X > x), evaluated without cancellation in the far upper tail.
[[nodiscard]] double survival(const DistSpec& spec, double x);

}  // namespace apv::dist
