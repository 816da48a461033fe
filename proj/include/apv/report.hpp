#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "apv/cohorts.hpp"
#include "apv/descriptive.hpp"
#include "apv/hedonic.hpp"
#include "apv/median_inference.hpp"
#include "apv/returns.hpp"

namespace apv::report {

/// Empty cells print as NA.
using Cell = std::variant<std::monostate, std::string, long long, double>;

[[nodiscard]] Cell cell(std::optional<double> v);
[[nodiscard]] Cell cell(std::size_t v);

/// Six significant digits, NA for non-finite values.
[[nodiscard]] std::string format_number(double v);
[[nodiscard]] std::string format_cell(const Cell& c);

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

/// A chart-ready series of (x, y) points; y may be missing.
struct Series {
    std::string name;
    std::string x_label;
    std::string y_label;
    std::vector<std::pair<Cell, Cell>> points;
};

struct Report {
    std::string command;
    std::vector<Table> tables;
    std::vector<Series> series;
    std::vector<std::pair<std::string, std::string>> notes;  ///< (key, text)
};

struct RunStamp {
    std::string config_digest;
    std::uint64_t seed = 0;
};

enum class Format { csv, json, plotdata };

/// Writes the report in one format and returns the files written:
/// csv gives <command>_<table>.csv per table, json gives <command>.json and
/// plotdata gives <command>_plot.csv. A table without rows is written with a
/// single NA row. Throws IoError when the directory cannot be written.
std::vector<std::filesystem::path> emit_report(const Report& report, Format format,
                                               const std::filesystem::path& out_dir, const RunStamp& stamp);

/// All three formats.
std::vector<std::filesystem::path> emit_all(const Report& report, const std::filesystem::path& out_dir,
                                            const RunStamp& stamp);

[[nodiscard]] Report describe_report(const std::vector<std::pair<std::string, SummaryStats>>& blocks);
[[nodiscard]] Report matrix_report(const ComparisonMatrix& matrix);
[[nodiscard]] Report cohorts_report(const std::vector<std::pair<std::string, CohortComparison>>& comparisons);
[[nodiscard]] Report lifecycle_report(const std::vector<LifecycleCurve>& curves);
[[nodiscard]] Report returns_report(const std::vector<std::pair<std::string, ReturnSeries>>& series);
[[nodiscard]] Report repeat_sales_report(const RepeatSalesReport& report);
[[nodiscard]] Report index_report(const IndexSeries& index);

struct HpmOutcome {
    HedonicFit fit;
    std::optional<WhiteTestResult> white;
    bool white_cross_products = true;
    ReturnSeries representative;
    ReturnSeries market;
    std::optional<ReturnSeries> apv;
    std::optional<ValidationReport> validation;
};

[[nodiscard]] Report hpm_report(const HpmOutcome& outcome);

}  // namespace apv::report
