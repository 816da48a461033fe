#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "apv/ingest.hpp"
#include "apv/least_squares.hpp"
#include "apv/returns.hpp"

namespace apv {

enum class Geometry { area, height, width, aspect_ratio, diagonal };

[[nodiscard]] const char* geometry_name(Geometry g);

/// aspect_ratio is height / width; diagonal is sqrt(height^2 + width^2).
[[nodiscard]] double geometry_value(Geometry g, double height_cm, double width_cm);

/// Regressors of the hedonic model. A degree of 0 disables a term.
struct DesignSpec {
    int age_degree = 4;
    std::map<Geometry, int> geometry = {{Geometry::area, 2},
                                        {Geometry::height, 2},
                                        {Geometry::width, 2},
                                        {Geometry::aspect_ratio, 2},
                                        {Geometry::diagonal, 0}};
    bool canvas_dummy = true;
    std::vector<Subject> subject_dummies = {std::begin(kAllSubjects), std::end(kAllSubjects)};
    bool painter_dummies = true;           ///< only when the sample spans several artists
    std::optional<int> reference_year;     ///< omitted year dummy; defaults to the first year
    bool drop_constant_dummies = true;

    /// Applies "age=4,area=2,diagonal=1"; throws DomainError on unknown terms.
    void apply_degrees(const std::string& text);
    void validate() const;
};

enum class ColumnKind { intercept, continuous, dummy };

/// A design matrix with its response and the metadata the return
/// estimators need.
struct DesignData {
    linalg::Matrix x;
    std::vector<double> y;  ///< ln(real premium price)
    std::vector<std::string> labels;
    std::vector<ColumnKind> kinds;
    std::vector<int> row_years;
    std::vector<int> years;                   ///< distinct, ascending
    std::optional<int> reference_year;
    std::map<int, std::size_t> year_column;   ///< year -> column, reference year absent
    std::vector<std::pair<std::string, std::string>> diagnostics;  ///< (sale_id or column, reason)
};

/// Intercept, age powers, geometry powers, then dummies (canvas, subjects,
/// painters, sale years). Sales without an execution year (or of an artist
/// missing from `artists`) are excluded with a diagnostic when age terms are
/// active. Throws InsufficientData for fewer than two distinct sale years.
[[nodiscard]] DesignData build_design_matrix(const std::vector<AdjustedSale>& sales,
                                             const std::vector<ArtistRecord>& artists,
                                             const DesignSpec& spec = {});

struct HedonicFit {
    DesignData design;
    std::vector<double> coefficients;
    std::vector<double> std_errors;
    std::vector<double> t_stats;
    std::vector<double> p_values;
    std::vector<double> residuals;
    double r2 = 0.0;
    double adj_r2 = 0.0;
    double f_stat = 0.0;
    double f_p = 1.0;
    std::size_t n = 0;
    std::size_t k = 0;  ///< regressors excluding the intercept
    double sigma2 = 0.0;

    [[nodiscard]] std::optional<double> coefficient(const std::string& label) const;
};

/// Least squares through Householder QR. Throws Underdetermined when rows <
/// columns and RankDeficient (naming a minimal dependent column set) when the
/// matrix lacks full column rank.
[[nodiscard]] HedonicFit ols_fit(DesignData design);

/// Same fit for a bare matrix; column kinds are inferred from the values.
[[nodiscard]] HedonicFit ols_fit(const linalg::Matrix& x, const std::vector<double>& y,
                                 const std::vector<std::string>& labels);

struct WhiteTestResult {
    double statistic = 0.0;  ///< n * R^2 of the auxiliary regression
    double df = 0.0;
    double p_value = 1.0;
    std::size_t aux_regressors = 0;
    std::size_t dropped_dependent = 0;  ///< auxiliary columns removed as dependent
};

/// Regresses squared residuals on the regressors, squares of continuous
/// regressors and all pairwise cross-products. Throws InsufficientData when
/// the sample has fewer than aux_regressors + 2 rows.
[[nodiscard]] WhiteTestResult white_test(const HedonicFit& fit, bool cross_products = true);

struct YearCharacteristics {
    int year = 0;
    std::size_t n = 0;
    std::vector<double> mean_row;  ///< averaged design row, own year dummy = 1
};

[[nodiscard]] std::vector<YearCharacteristics> yearly_mean_characteristics(const DesignData& design);

/// Representative price P_i = exp(mean_row_i . beta) and returns P_{i+1}/P_i - 1.
[[nodiscard]] ReturnSeries representative_returns(const HedonicFit& fit,
                                                  const std::vector<YearCharacteristics>& yearly);

/// Market returns exp(delta_{i+1} - delta_i) - 1 from the year dummies.
[[nodiscard]] ReturnSeries time_dummy_returns(const HedonicFit& fit);

struct SeriesMoments {
    double avg = 0.0;
    double sd = 0.0;
};

struct ValidationReport {
    std::size_t n_overlap = 0;
    SeriesMoments apv;
    SeriesMoments hpm;
    double correlation = 0.0;
    std::optional<SeriesMoments> market;
    std::optional<double> market_correlation;  ///< APV vs market returns
    std::vector<std::pair<int, std::pair<double, double>>> pairs;  ///< from_year -> (apv, hpm)
};

/// Pearson correlation of APV and HPM returns over shared year pairs.
/// Throws InsufficientData for fewer than three overlapping returns.
[[nodiscard]] ValidationReport validate_against_apv(const ReturnSeries& apv_returns,
                                                    const ReturnSeries& hpm_returns,
                                                    const ReturnSeries* market_returns = nullptr);

}  // namespace apv
