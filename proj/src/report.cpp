#include "apv/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <system_error>

#include "apv/csv.hpp"
#include "apv/error.hpp"
#include "json.hpp"

namespace apv::report {

Cell cell(std::optional<double> v) {
    if (!v) return std::monostate{};
    return *v;
}

Cell cell(std::size_t v) { return static_cast<long long>(v); }

std::string format_number(double v) {
    if (!std::isfinite(v)) return "NA";
    if (v == 0.0) return "0";  // folds -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string format_cell(const Cell& c) {
    if (std::holds_alternative<std::monostate>(c)) return "NA";
    if (const auto* s = std::get_if<std::string>(&c)) return *s;
    if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
    return format_number(std::get<double>(c));
}

namespace {

using Json = nlohmann::ordered_json;

Json to_json(const Cell& c) {
    if (std::holds_alternative<std::monostate>(c)) return nullptr;
    if (const auto* s = std::get_if<std::string>(&c)) return *s;
    if (const auto* i = std::get_if<long long>(&c)) return *i;
    const double v = std::get<double>(c);
    if (!std::isfinite(v)) return nullptr;
    // round through the printed form so JSON and CSV carry the same digits
    return std::strtod(format_number(v).c_str(), nullptr);
}

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw IoError("cannot create output directory '" + dir.string() + "'");
    }
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::string stamp_lines(const RunStamp& stamp) {
    return "# config_digest=" + stamp.config_digest + "\n# seed=" + std::to_string(stamp.seed) + "\n";
}

std::string csv_line(const std::vector<std::string>& fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) line += ',';
        line += csv::escape(fields[i]);
    }
    return line + "\n";
}

std::string table_csv(const Table& t, const RunStamp& stamp) {
    std::string out = stamp_lines(stamp) + csv_line(t.columns);
    if (t.rows.empty()) {
        out += csv_line(std::vector<std::string>(t.columns.size(), "NA"));
        return out;
    }
    for (const auto& row : t.rows) {
        std::vector<std::string> fields;
        for (const Cell& c : row) fields.push_back(format_cell(c));
        out += csv_line(fields);
    }
    return out;
}

std::string report_json(const Report& r, const RunStamp& stamp) {
    Json j;
    j["command"] = r.command;
    j["config_digest"] = stamp.config_digest;
    j["seed"] = stamp.seed;
    Json notes = Json::object();
    for (const auto& [k, v] : r.notes) notes[k] = v;
    j["notes"] = notes;
    Json tables = Json::object();
    for (const Table& t : r.tables) {
        Json rows = Json::array();
        for (const auto& row : t.rows) {
            Json jr = Json::array();
            for (const Cell& c : row) jr.push_back(to_json(c));
            rows.push_back(jr);
        }
        tables[t.name] = {{"columns", t.columns}, {"rows", rows}};
    }
    j["tables"] = tables;
    Json series = Json::array();
    for (const Series& s : r.series) {
        Json pts = Json::array();
        for (const auto& [x, y] : s.points) pts.push_back(Json::array({to_json(x), to_json(y)}));
        series.push_back({{"name", s.name}, {"x", s.x_label}, {"y", s.y_label}, {"points", pts}});
    }
    j["series"] = series;
    return j.dump(2) + "\n";
}

std::string plot_csv(const Report& r, const RunStamp& stamp) {
    std::string out = stamp_lines(stamp) + csv_line({"series", "x_label", "y_label", "x", "y"});
    for (const Series& s : r.series) {
        for (const auto& [x, y] : s.points) {
            out += csv_line({s.name, s.x_label, s.y_label, format_cell(x), format_cell(y)});
        }
    }
    return out;
}

}  // namespace

std::vector<std::filesystem::path> emit_report(const Report& report, Format format,
                                               const std::filesystem::path& out_dir, const RunStamp& stamp) {
    ensure_dir(out_dir);
    std::vector<std::filesystem::path> written;
    switch (format) {
        case Format::csv:
            for (const Table& t : report.tables) {
                const auto path = out_dir / (report.command + "_" + t.name + ".csv");
                write_file(path, table_csv(t, stamp));
                written.push_back(path);
            }
            break;
        case Format::json: {
            const auto path = out_dir / (report.command + ".json");
            write_file(path, report_json(report, stamp));
            written.push_back(path);
            break;
        }
        case Format::plotdata: {
            const auto path = out_dir / (report.command + "_plot.csv");
            write_file(path, plot_csv(report, stamp));
            written.push_back(path);
            break;
        }
    }
    return written;
}

std::vector<std::filesystem::path> emit_all(const Report& report, const std::filesystem::path& out_dir,
                                            const RunStamp& stamp) {
    std::vector<std::filesystem::path> all;
    for (Format f : {Format::csv, Format::json, Format::plotdata}) {
        auto files = emit_report(report, f, out_dir, stamp);
        all.insert(all.end(), files.begin(), files.end());
    }
    return all;
}

namespace {

Cell text(std::string s) { return s; }

Cell integer(long long v) { return v; }

void test_cells(std::vector<Cell>& row, const std::optional<MedianTestResult>& t) {
    if (!t) {
        row.insert(row.end(), 5, std::monostate{});
        return;
    }
    row.push_back(t->diff);
    row.push_back(t->se_diff);
    row.push_back(t->z);
    row.push_back(t->p_two_sided);
    row.push_back(text(significance_code(t->code)));
}

}  // namespace

Report describe_report(const std::vector<std::pair<std::string, SummaryStats>>& blocks) {
    Report r;
    r.command = "describe";
    Table t{"summary",
            {"artist", "n", "mean", "median", "sd", "cv", "skewness", "excess_kurtosis", "jarque_bera", "jb_p",
             "degenerate"},
            {}};
    Series med{"median_apv", "artist", "apv_usd_per_cm2", {}};
    Series cv{"cv", "artist", "cv", {}};
    for (const auto& [name, s] : blocks) {
        t.rows.push_back({text(name), cell(s.n), s.mean, s.median, cell(s.sd), cell(s.cv), cell(s.skewness),
                          cell(s.excess_kurtosis), cell(s.jb), cell(s.jb_p), text(s.degenerate ? "yes" : "no")});
        med.points.emplace_back(text(name), s.median);
        cv.points.emplace_back(text(name), cell(s.cv));
    }
    r.tables.push_back(std::move(t));
    r.series = {std::move(med), std::move(cv)};
    return r;
}

Report matrix_report(const ComparisonMatrix& m) {
    Report r;
    r.command = "compare-artists";
    const std::size_t k = m.labels.size();

    Table grid{"matrix", {"artist"}, {}};
    for (const auto& l : m.labels) grid.columns.push_back(l);
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<Cell> row{text(m.labels[i])};
        for (std::size_t j = 0; j < k; ++j) {
            if (j == i) {
                row.push_back(m.medians[i]);
            } else if (j < i) {
                const auto& c = m.at(i, j);
                row.push_back(text(format_number(c.diff) + " " + significance_code(c.code)));
            } else {
                row.push_back(text(""));
            }
        }
        grid.rows.push_back(std::move(row));
    }

    Table pairs{"pairs", {"row", "column", "row_median", "column_median", "diff", "se_diff", "z", "p", "code"}, {}};
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            std::vector<Cell> row{text(m.labels[i]), text(m.labels[j]), m.medians[i], m.medians[j]};
            test_cells(row, m.cells[i][j]);
            pairs.rows.push_back(std::move(row));
        }
    }

    Table groups{"groups", {"artist", "n", "median"}, {}};
    Series med{"median_apv", "artist", "apv_usd_per_cm2", {}};
    for (std::size_t i = 0; i < k; ++i) {
        groups.rows.push_back({text(m.labels[i]), cell(m.counts[i]), m.medians[i]});
        med.points.emplace_back(text(m.labels[i]), m.medians[i]);
    }
    Table excluded{"excluded", {"artist", "reason"}, {}};
    for (const auto& [label, reason] : m.excluded) excluded.rows.push_back({text(label), text(reason)});

    r.tables = {std::move(grid), std::move(pairs), std::move(groups), std::move(excluded)};
    r.series = {std::move(med)};
    return r;
}

Report cohorts_report(const std::vector<std::pair<std::string, CohortComparison>>& comparisons) {
    Report r;
    r.command = "cohorts";
    Table t{"cohorts",
            {"scope", "cohort", "yes_n", "yes_median", "no_n", "no_median", "diff", "se_diff", "z", "p", "code",
             "note"},
            {}};
    Series diff{"median_diff", "cohort", "apv_usd_per_cm2", {}};
    for (const auto& [scope, c] : comparisons) {
        std::vector<Cell> row{text(scope), text(c.name), cell(c.yes_count), cell(c.yes_median), cell(c.no_count),
                              cell(c.no_median)};
        test_cells(row, c.test);
        row.push_back(text(c.na_reason));
        t.rows.push_back(std::move(row));
        diff.points.emplace_back(text(scope + ":" + c.name), c.test ? Cell{c.test->diff} : Cell{});
    }
    r.tables.push_back(std::move(t));
    r.series.push_back(std::move(diff));
    return r;
}

Report lifecycle_report(const std::vector<LifecycleCurve>& curves) {
    Report r;
    r.command = "lifecycle";
    Table t{"curve", {"artist", "age", "n", "median_apv"}, {}};
    Table meta{"coverage", {"artist", "ages", "min_count", "window", "missing_execution_year"}, {}};
    for (const LifecycleCurve& c : curves) {
        Series s{c.artist_id, "age", "median_apv", {}};
        for (const LifecyclePoint& p : c.points) {
            t.rows.push_back({text(c.artist_id), integer(p.age), cell(p.n), p.median_apv});
            s.points.emplace_back(integer(p.age), p.median_apv);
        }
        meta.rows.push_back({text(c.artist_id), cell(c.points.size()), cell(c.min_count), integer(c.window),
                             cell(c.missing_execution_year)});
        r.series.push_back(std::move(s));
    }
    r.tables = {std::move(t), std::move(meta)};
    return r;
}

namespace {

std::string join_years(const std::vector<int>& years) {
    std::string out;
    for (int y : years) {
        if (!out.empty()) out += ' ';
        out += std::to_string(y);
    }
    return out;
}

}  // namespace

Report returns_report(const std::vector<std::pair<std::string, ReturnSeries>>& all) {
    Report r;
    r.command = "returns";
    Table summary{"summary",
                  {"artist", "initial_year", "initial_level", "final_year", "final_level", "cumulative_return",
                   "n_returns", "avg_return", "sd_return", "avg_level", "sd_level", "gap_years"},
                  {}};
    Table levels{"levels", {"artist", "year", "avg_apv", "n_sales"}, {}};
    Table returns{"returns", {"artist", "from_year", "to_year", "return"}, {}};
    for (const auto& [name, rs] : all) {
        const ReturnSummary& s = rs.summary;
        summary.rows.push_back({text(name), integer(s.initial_year), s.initial_level, integer(s.final_year),
                                s.final_level, s.cumulative_return, cell(s.n_returns), cell(s.avg_return),
                                cell(s.sd_return), s.avg_level, cell(s.sd_level), text(join_years(rs.gap_years))});
        Series lv{name + ":avg_apv", "year", "avg_apv", {}};
        for (const YearLevel& l : rs.levels) {
            levels.rows.push_back({text(name), integer(l.year), l.level, cell(l.n_sales)});
            lv.points.emplace_back(integer(l.year), l.level);
        }
        Series rt{name + ":return", "to_year", "return", {}};
        for (const YearReturn& y : rs.returns) {
            returns.rows.push_back({text(name), integer(y.from_year), integer(y.to_year), y.value});
            rt.points.emplace_back(integer(y.to_year), y.value);
        }
        r.series.push_back(std::move(lv));
        r.series.push_back(std::move(rt));
    }
    r.tables = {std::move(summary), std::move(levels), std::move(returns)};
    return r;
}

Report repeat_sales_report(const RepeatSalesReport& rep) {
    Report r;
    r.command = "repeat-sales";
    Table t{"repeat_sales",
            {"artist", "all_n", "all_median", "all_avg_return", "repeat_n", "repeat_median", "repeat_avg_return",
             "diff", "se_diff", "z", "p", "code"},
            {}};
    Series all{"all_avg_return", "artist", "avg_return", {}};
    Series rs{"repeat_avg_return", "artist", "avg_return", {}};
    for (const RepeatSalesRow& row : rep.rows) {
        std::vector<Cell> cells{text(row.artist_id),   cell(row.all_n),          row.all_median,
                                cell(row.all_avg_return), cell(row.repeat_n), cell(row.repeat_median),
                                cell(row.repeat_avg_return)};
        test_cells(cells, row.all_vs_repeat);
        t.rows.push_back(std::move(cells));
        all.points.emplace_back(text(row.artist_id), cell(row.all_avg_return));
        rs.points.emplace_back(text(row.artist_id), cell(row.repeat_avg_return));
    }
    r.tables.push_back(std::move(t));
    r.series = {std::move(all), std::move(rs)};
    r.notes.emplace_back("no_repeats", rep.no_repeats ? "yes" : "no");
    return r;
}

Report index_report(const IndexSeries& idx) {
    Report r;
    r.command = "index";
    Table t{"index", {"month", "level", "n_contributing"}, {}};
    Series s{"apv_index", "month", "avg_apv", {}};
    for (const IndexPoint& p : idx.points) {
        t.rows.push_back({text(p.month.to_string()), cell(p.level), cell(p.n_contributing)});
        s.points.emplace_back(text(p.month.to_string()), cell(p.level));
    }
    r.tables.push_back(std::move(t));
    r.series.push_back(std::move(s));
    std::string universe;
    for (const auto& a : idx.rule.universe) universe += (universe.empty() ? "" : " ") + a;
    r.notes.emplace_back("window_months", std::to_string(idx.rule.window_months));
    r.notes.emplace_back("min_price_exclusive", format_number(idx.rule.min_price));
    r.notes.emplace_back("universe", universe.empty() ? "all" : universe);
    return r;
}

Report hpm_report(const HpmOutcome& o) {
    Report r;
    r.command = "hpm";
    const HedonicFit& f = o.fit;

    Table coef{"coefficients", {"term", "estimate", "std_error", "t", "p"}, {}};
    for (std::size_t c = 0; c < f.coefficients.size(); ++c) {
        coef.rows.push_back({text(f.design.labels[c]), f.coefficients[c], f.std_errors[c], f.t_stats[c],
                             f.p_values[c]});
    }

    Table fit{"fit", {"statistic", "value"}, {}};
    fit.rows.push_back({text("n"), cell(f.n)});
    fit.rows.push_back({text("k"), cell(f.k)});
    fit.rows.push_back({text("r2"), f.r2});
    fit.rows.push_back({text("adj_r2"), f.adj_r2});
    fit.rows.push_back({text("f_stat"), f.f_stat});
    fit.rows.push_back({text("f_p"), f.f_p});
    fit.rows.push_back({text("sigma2"), f.sigma2});
    if (o.white) {
        fit.rows.push_back({text("white_stat"), o.white->statistic});
        fit.rows.push_back({text("white_df"), o.white->df});
        fit.rows.push_back({text("white_p"), o.white->p_value});
        fit.rows.push_back({text("white_aux_regressors"), cell(o.white->aux_regressors)});
        fit.rows.push_back({text("white_cross_products"), text(o.white_cross_products ? "yes" : "no")});
    }

    std::map<int, std::map<std::string, double>> by_year;
    for (const YearReturn& y : o.representative.returns) by_year[y.from_year]["representative"] = y.value;
    for (const YearReturn& y : o.market.returns) by_year[y.from_year]["market"] = y.value;
    if (o.apv) {
        for (const YearReturn& y : o.apv->returns) by_year[y.from_year]["apv"] = y.value;
    }
    Table returns{"returns", {"from_year", "to_year", "representative", "market", "apv"}, {}};
    const auto get = [](const std::map<std::string, double>& m, const char* key) -> Cell {
        const auto it = m.find(key);
        return it == m.end() ? Cell{} : Cell{it->second};
    };
    Series rep{"representative_return", "to_year", "return", {}};
    Series mkt{"market_return", "to_year", "return", {}};
    Series apv_s{"apv_return", "to_year", "return", {}};
    for (const auto& [year, m] : by_year) {
        returns.rows.push_back(
            {integer(year), integer(year + 1), get(m, "representative"), get(m, "market"), get(m, "apv")});
        rep.points.emplace_back(integer(year + 1), get(m, "representative"));
        mkt.points.emplace_back(integer(year + 1), get(m, "market"));
        apv_s.points.emplace_back(integer(year + 1), get(m, "apv"));
    }

    Table validation{"validation", {"series", "n_overlap", "avg_return", "sd_return", "correlation_with_apv"}, {}};
    if (o.validation) {
        const ValidationReport& v = *o.validation;
        validation.rows.push_back({text("apv"), cell(v.n_overlap), v.apv.avg, v.apv.sd, Cell{}});
        validation.rows.push_back({text("representative"), cell(v.n_overlap), v.hpm.avg, v.hpm.sd, v.correlation});
        if (v.market) {
            validation.rows.push_back(
                {text("market"), cell(v.n_overlap), v.market->avg, v.market->sd, cell(v.market_correlation)});
        }
    }

    Table diagnostics{"diagnostics", {"item", "reason"}, {}};
    for (const auto& [item, reason] : f.design.diagnostics) diagnostics.rows.push_back({text(item), text(reason)});

    r.tables = {std::move(coef), std::move(fit), std::move(returns), std::move(validation), std::move(diagnostics)};
    r.series = {std::move(rep), std::move(mkt), std::move(apv_s)};
    return r;
}

}  // namespace apv::report
