#include "apv/distributions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "apv/error.hpp"

namespace apv::dist {

namespace {

constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;
constexpr int kMaxIter = 100000;

double gamma_prefactor(double a, double x) {
    return std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_series(double a, double x) {
    double ap = a;
    double term = 1.0 / a;
    double sum = term;
    for (int n = 0; n < kMaxIter; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps) break;
    }
    return sum * gamma_prefactor(a, x);
}

// Modified Lentz evaluation of the continued fraction for Q(a, x).
double gamma_fraction(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return gamma_prefactor(a, x) * h;
}

double beta_fraction(double a, double b, double x) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m < kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

void require_df(double df, const char* name) {
    if (!(df > 0.0) || !std::isfinite(df)) {
        throw DomainError(std::string("degrees of freedom must be positive: ") + name);
    }
}

void validate(const DistSpec& spec, double x) {
    if (std::isnan(x)) throw DomainError("distribution argument is NaN");
    switch (spec.family) {
        case Family::standard_normal:
            break;
        case Family::chi_square:
        case Family::student_t:
            require_df(spec.df1, "df");
            break;
        case Family::fisher_f:
            require_df(spec.df1, "df1");
            require_df(spec.df2, "df2");
            break;
    }
}

}  // namespace

double gamma_p(double a, double x) {
    if (!(a > 0.0)) throw DomainError("gamma_p: shape must be positive");
    if (x < 0.0) throw DomainError("gamma_p: x must be nonnegative");
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    if (x < a + 1.0) return gamma_series(a, x);
    return 1.0 - gamma_fraction(a, x);
}

double gamma_q(double a, double x) {
    if (!(a > 0.0)) throw DomainError("gamma_q: shape must be positive");
    if (x < 0.0) throw DomainError("gamma_q: x must be nonnegative");
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    if (x < a + 1.0) return 1.0 - gamma_series(a, x);
    return gamma_fraction(a, x);
}

double beta_inc(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("beta_inc: shapes must be positive");
    if (x < 0.0 || x > 1.0) throw DomainError("beta_inc: x must lie in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double front = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                                  a * std::log(x) + b * std::log1p(-x));
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_fraction(a, b, x) / a;
    return 1.0 - front * beta_fraction(b, a, 1.0 - x) / b;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("normal_quantile: p must lie in (0, 1)");

    // Acklam's rational approximation, then one Halley step against erfc.
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    for (int i = 0; i < 2; ++i) {
        const double e = normal_cdf(x) - p;
        const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
        x -= u / (1.0 + 0.5 * x * u);
    }
    return x;
}

double cdf(const DistSpec& spec, double x) {
    validate(spec, x);
    switch (spec.family) {
        case Family::standard_normal:
            return normal_cdf(x);
        case Family::chi_square:
            if (x <= 0.0) return 0.0;
            return gamma_p(0.5 * spec.df1, 0.5 * x);
        case Family::student_t: {
            if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
            const double df = spec.df1;
            const double tail = 0.5 * beta_inc(0.5 * df, 0.5, df / (df + x * x));
            return x > 0.0 ? 1.0 - tail : tail;
        }
        case Family::fisher_f: {
            if (x <= 0.0) return 0.0;
            if (std::isinf(x)) return 1.0;
            const double u = spec.df1 * x;
            return beta_inc(0.5 * spec.df1, 0.5 * spec.df2, u / (u + spec.df2));
        }
    }
    return 0.0;
}

double survival(const DistSpec& spec, double x) {
    validate(spec, x);
    switch (spec.family) {
        case Family::standard_normal:
            return 0.5 * std::erfc(x / std::numbers::sqrt2);
        case Family::chi_square:
            if (x <= 0.0) return 1.0;
            return gamma_q(0.5 * spec.df1, 0.5 * x);
        case Family::student_t: {
            if (std::isinf(x)) return x > 0 ? 0.0 : 1.0;
            const double df = spec.df1;
            const double tail = 0.5 * beta_inc(0.5 * df, 0.5, df / (df + x * x));
            return x > 0.0 ? tail : 1.0 - tail;
        }
        case Family::fisher_f: {
            if (x <= 0.0) return 1.0;
            if (std::isinf(x)) return 0.0;
            const double u = spec.df1 * x;
            return beta_inc(0.5 * spec.df2, 0.5 * spec.df1, spec.df2 / (u + spec.df2));
        }
    }
    return 1.0;
}

}  // namespace apv::dist
