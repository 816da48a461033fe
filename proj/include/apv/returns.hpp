#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "apv/ingest.hpp"
#include "apv/median_inference.hpp"

namespace apv {

/// One yearly level: the mean APV of the year's sales, or a model price.
struct YearLevel {
    int year = 0;
    double level = 0.0;
    std::size_t n_sales = 0;
};

/// Simple return between two consecutive calendar years.
struct YearReturn {
    int from_year = 0;
    int to_year = 0;
    double value = 0.0;
};

struct ReturnSummary {
    std::size_t n_returns = 0;
    std::optional<double> avg_return;  ///< arithmetic mean of year-to-year returns
    std::optional<double> sd_return;   ///< sample sd, needs two returns
    double cumulative_return = 0.0;    ///< final / initial - 1
    int initial_year = 0;
    int final_year = 0;
    double initial_level = 0.0;
    double final_level = 0.0;
    double avg_level = 0.0;
    std::optional<double> sd_level;
};

struct ReturnSeries {
    std::vector<YearLevel> levels;
    std::vector<YearReturn> returns;
    std::vector<int> gap_years;  ///< calendar years missing between first and last level
    ReturnSummary summary;
};

/// Arithmetic mean APV per calendar year, ascending by year.
[[nodiscard]] std::vector<YearLevel> annual_avg_apv(const std::vector<AdjustedSale>& sales);

/// Returns only across consecutive present years; missing years are listed
/// as gaps. The cumulative return spans first to last present year. Throws
/// InsufficientData for fewer than two levels.
[[nodiscard]] ReturnSeries return_series(std::vector<YearLevel> levels);

/// Key identifying a painting across resales.
using RepeatMatcher = std::function<std::string(const AdjustedSale&)>;

/// painting_id when present, else artist + normalized title + dimensions.
[[nodiscard]] std::string default_repeat_key(const AdjustedSale& sale);

/// Case-folds and collapses runs of whitespace.
[[nodiscard]] std::string normalize_title(const std::string& title);

struct RepeatSalesRow {
    std::string artist_id;
    std::size_t all_n = 0;
    double all_median = 0.0;
    std::optional<double> all_avg_return;
    std::size_t repeat_n = 0;
    std::optional<double> repeat_median;
    std::optional<double> repeat_avg_return;
    std::optional<MedianTestResult> all_vs_repeat;  ///< diff = all - repeat; empty when untestable
};

struct RepeatSalesReport {
    std::vector<RepeatSalesRow> rows;  ///< sorted by artist_id
    bool no_repeats = false;
};

struct RepeatSalesResult {
    std::vector<AdjustedSale> subset;  ///< input order preserved
    RepeatSalesReport report;
};

/// Every sale of every painting observed at least twice.
[[nodiscard]] RepeatSalesResult repeat_sales_subset(const std::vector<AdjustedSale>& sales,
                                                    const RepeatMatcher& matcher = default_repeat_key,
                                                    const MedianSeEstimator& estimator = default_median_se(),
                                                    const SignificanceThresholds& thresholds = {});

struct IndexRule {
    int window_months = 12;
    double min_price = 50000.0;          ///< strict: real price must exceed it
    std::set<std::string> universe;      ///< artist ids; empty means all
    std::optional<YearMonth> first;      ///< defaults to the first qualifying month
    std::optional<YearMonth> last;       ///< defaults to last qualifying month + window - 1
};

struct IndexPoint {
    YearMonth month;
    std::optional<double> level;  ///< empty marks a month without qualifying sales
    std::size_t n_contributing = 0;
};

struct IndexSeries {
    IndexRule rule;
    std::vector<IndexPoint> points;
};

[[nodiscard]] bool index_qualifies(const AdjustedSale& sale, const IndexRule& rule);

/// Trailing-window mean APV over sales that pass the rule, one point per month.
[[nodiscard]] IndexSeries apv_index(const std::vector<AdjustedSale>& sales, const IndexRule& rule);

/// Pearson correlation; throws InsufficientData for fewer than two pairs and
/// DomainError for mismatched lengths.
[[nodiscard]] double pearson(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace apv
