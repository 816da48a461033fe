#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace apv::linalg {

/// Dense column-major matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[c * rows_ + r]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[c * rows_ + r]; }

    [[nodiscard]] std::span<double> col(std::size_t c) { return {data_.data() + c * rows_, rows_}; }
    [[nodiscard]] std::span<const double> col(std::size_t c) const {
        return {data_.data() + c * rows_, rows_};
    }

    /// Appends a column of length rows(); the first column fixes rows().
    void append_col(std::span<const double> values);

    /// Keeps only the listed columns, in the given order.
    [[nodiscard]] Matrix select_cols(const std::vector<std::size_t>& keep) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Relative tolerance on column norms for declaring a column dependent.
inline constexpr double kRankTolerance = 1e-10;

/**
 * Householder QR processed column by column in the given order.
 *
 * A column is dependent when the norm of its component orthogonal to the
 * accepted columns is at most `tolerance` times its own norm. Dependent
 * columns are skipped; `dependent()` lists them and `dependency_set(j)` gives
 * a minimal set of accepted columns that, with j, is linearly dependent.
 */
class HouseholderQr {
public:
    explicit HouseholderQr(const Matrix& x, double tolerance = kRankTolerance);

    [[nodiscard]] const std::vector<std::size_t>& accepted() const { return accepted_; }
    [[nodiscard]] const std::vector<std::size_t>& dependent() const { return dependent_; }
    [[nodiscard]] bool full_rank() const { return dependent_.empty(); }

    /// Indices of accepted columns that combine to column j (j dependent), plus j.
    [[nodiscard]] std::vector<std::size_t> dependency_set(std::size_t j) const;

    struct Solution {
        std::vector<double> coefficients;  ///< aligned with accepted()
        std::vector<double> residuals;
    };

    /// Least-squares fit of y on the accepted columns.
    [[nodiscard]] Solution solve(std::span<const double> y) const;

    /// (R^T R)^{-1} = (X_a^T X_a)^{-1} over the accepted columns.
    [[nodiscard]] Matrix inverse_gram() const;

private:
    void apply_qt(std::span<double> v) const;
    void apply_q(std::span<double> v) const;
    [[nodiscard]] std::vector<double> back_substitute(std::span<const double> rhs) const;

    std::size_t rows_ = 0;
    Matrix work_;  ///< R in the upper part of accepted columns, reflectors below
    std::vector<double> betas_;
    std::vector<double> diag_;  ///< R diagonal, per accepted column
    std::vector<double> norms_;
    std::vector<std::size_t> accepted_;
    std::vector<std::size_t> dependent_;
    std::vector<std::vector<double>> dependent_top_;  ///< Q^T x_j above the accepted rank
};

}  // namespace apv::linalg
