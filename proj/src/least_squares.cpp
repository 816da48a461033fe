#include "apv/least_squares.hpp"

#include <algorithm>
#include <cmath>

#include "apv/error.hpp"

namespace apv::linalg {

void Matrix::append_col(std::span<const double> values) {
    if (cols_ == 0 && rows_ == 0) rows_ = values.size();
    if (values.size() != rows_) throw DomainError("column length does not match matrix rows");
    data_.insert(data_.end(), values.begin(), values.end());
    ++cols_;
}

Matrix Matrix::select_cols(const std::vector<std::size_t>& keep) const {
    Matrix out(rows_, 0);
    out.rows_ = rows_;
    for (std::size_t c : keep) out.append_col(col(c));
    return out;
}

namespace {

double norm2(std::span<const double> v) {
    // scaled accumulation, safe for large entries
    double scale = 0.0, ssq = 1.0;
    for (double x : v) {
        if (x == 0.0) continue;
        const double a = std::abs(x);
        if (scale < a) {
            ssq = 1.0 + ssq * (scale / a) * (scale / a);
            scale = a;
        } else {
            ssq += (a / scale) * (a / scale);
        }
    }
    return scale * std::sqrt(ssq);
}

}  // namespace

HouseholderQr::HouseholderQr(const Matrix& x, double tolerance)
    : rows_(x.rows()), work_(x), norms_(x.cols(), 0.0), dependent_top_(x.cols()) {
    const std::size_t n = x.rows();
    const std::size_t p = x.cols();
    std::size_t r = 0;
    for (std::size_t j = 0; j < p; ++j) {
        norms_[j] = norm2(x.col(j));
        std::span<double> col = work_.col(j);
        const double s = r < n ? norm2(col.subspan(r)) : 0.0;
        if (norms_[j] == 0.0 || s <= tolerance * norms_[j]) {
            dependent_.push_back(j);
            dependent_top_[j].assign(col.begin(), col.begin() + static_cast<std::ptrdiff_t>(r));
            continue;
        }

        const double alpha = col[r] > 0.0 ? -s : s;
        col[r] -= alpha;
        double vtv = 0.0;
        for (std::size_t i = r; i < n; ++i) vtv += col[i] * col[i];
        const double beta = 2.0 / vtv;
        for (std::size_t k = j + 1; k < p; ++k) {
            std::span<double> target = work_.col(k);
            double w = 0.0;
            for (std::size_t i = r; i < n; ++i) w += col[i] * target[i];
            w *= beta;
            for (std::size_t i = r; i < n; ++i) target[i] -= w * col[i];
        }
        betas_.push_back(beta);
        diag_.push_back(alpha);
        accepted_.push_back(j);
        ++r;
    }
}

void HouseholderQr::apply_qt(std::span<double> v) const {
    for (std::size_t t = 0; t < accepted_.size(); ++t) {
        const std::span<const double> h = work_.col(accepted_[t]);
        double w = 0.0;
        for (std::size_t i = t; i < rows_; ++i) w += h[i] * v[i];
        w *= betas_[t];
        for (std::size_t i = t; i < rows_; ++i) v[i] -= w * h[i];
    }
}

void HouseholderQr::apply_q(std::span<double> v) const {
    for (std::size_t t = accepted_.size(); t-- > 0;) {
        const std::span<const double> h = work_.col(accepted_[t]);
        double w = 0.0;
        for (std::size_t i = t; i < rows_; ++i) w += h[i] * v[i];
        w *= betas_[t];
        for (std::size_t i = t; i < rows_; ++i) v[i] -= w * h[i];
    }
}

std::vector<double> HouseholderQr::back_substitute(std::span<const double> rhs) const {
    const std::size_t m = rhs.size();
    std::vector<double> x(m, 0.0);
    for (std::size_t i = m; i-- > 0;) {
        double acc = rhs[i];
        for (std::size_t k = i + 1; k < m; ++k) acc -= work_(i, accepted_[k]) * x[k];
        x[i] = acc / diag_[i];
    }
    return x;
}

std::vector<std::size_t> HouseholderQr::dependency_set(std::size_t j) const {
    std::vector<std::size_t> out{j};
    if (norms_.at(j) == 0.0) return out;
    const std::vector<double>& top = dependent_top_.at(j);
    const std::vector<double> c = back_substitute(top);
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (std::abs(c[i]) * norms_[accepted_[i]] > 1e-8 * norms_[j]) out.push_back(accepted_[i]);
    }
    std::sort(out.begin(), out.end());
    return out;
}

HouseholderQr::Solution HouseholderQr::solve(std::span<const double> y) const {
    if (y.size() != rows_) throw DomainError("response length does not match design rows");
    std::vector<double> z(y.begin(), y.end());
    apply_qt(z);
    const std::size_t rank = accepted_.size();
    Solution s;
    s.coefficients = back_substitute(std::span<const double>(z).first(rank));
    std::fill(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(rank), 0.0);
    apply_q(z);
    s.residuals = std::move(z);
    return s;
}

Matrix HouseholderQr::inverse_gram() const {
    const std::size_t m = accepted_.size();
    // columns of R^{-1}
    Matrix rinv(m, m);
    for (std::size_t c = 0; c < m; ++c) {
        std::vector<double> e(c + 1, 0.0);
        e[c] = 1.0;
        const std::vector<double> x = back_substitute(e);
        for (std::size_t i = 0; i <= c; ++i) rinv(i, c) = x[i];
    }
    Matrix g(m, m);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = a; b < m; ++b) {
            double acc = 0.0;
            for (std::size_t k = std::max(a, b); k < m; ++k) acc += rinv(a, k) * rinv(b, k);
            g(a, b) = acc;
            g(b, a) = acc;
        }
    }
    return g;
}

}  // namespace apv::linalg
