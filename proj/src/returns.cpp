#include "apv/returns.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <unordered_map>

#include "apv/descriptive.hpp"
#include "apv/error.hpp"

namespace apv {

std::vector<YearLevel> annual_avg_apv(const std::vector<AdjustedSale>& sales) {
    std::map<int, std::pair<double, std::size_t>> acc;
    for (const AdjustedSale& s : sales) {
        auto& [sum, n] = acc[s.sale.sale_date.year];
        sum += s.apv;
        ++n;
    }
    std::vector<YearLevel> out;
    for (const auto& [year, a] : acc) {
        out.push_back({year, a.first / static_cast<double>(a.second), a.second});
    }
    return out;
}

ReturnSeries return_series(std::vector<YearLevel> levels) {
    if (levels.size() < 2) throw InsufficientData("return series needs at least two yearly levels");
    std::sort(levels.begin(), levels.end(),
              [](const YearLevel& a, const YearLevel& b) { return a.year < b.year; });
    for (std::size_t i = 1; i < levels.size(); ++i) {
        if (levels[i].year == levels[i - 1].year) {
            throw DomainError("duplicate level for year " + std::to_string(levels[i].year));
        }
    }

    ReturnSeries rs;
    rs.levels = std::move(levels);
    std::vector<double> values, level_values;
    for (std::size_t i = 0; i < rs.levels.size(); ++i) {
        level_values.push_back(rs.levels[i].level);
        if (i == 0) continue;
        const YearLevel& prev = rs.levels[i - 1];
        const YearLevel& cur = rs.levels[i];
        if (cur.year == prev.year + 1) {
            const double r = cur.level / prev.level - 1.0;
            rs.returns.push_back({prev.year, cur.year, r});
            values.push_back(r);
        } else {
            for (int y = prev.year + 1; y < cur.year; ++y) rs.gap_years.push_back(y);
        }
    }

    ReturnSummary& s = rs.summary;
    s.n_returns = values.size();
    if (!values.empty()) s.avg_return = mean(values);
    if (values.size() >= 2) s.sd_return = sample_sd(values);
    s.initial_year = rs.levels.front().year;
    s.final_year = rs.levels.back().year;
    s.initial_level = rs.levels.front().level;
    s.final_level = rs.levels.back().level;
    s.cumulative_return = s.final_level / s.initial_level - 1.0;
    s.avg_level = mean(level_values);
    s.sd_level = sample_sd(level_values);
    return rs;
}

std::string normalize_title(const std::string& title) {
    std::string out;
    bool pending_space = false;
    for (unsigned char c : title) {
        if (std::isspace(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.push_back(static_cast<char>(std::tolower(c)));
    }
    return out;
}

std::string default_repeat_key(const AdjustedSale& sale) {
    if (sale.sale.painting_id) return "id:" + *sale.sale.painting_id;
    char dims[64];
    std::snprintf(dims, sizeof dims, "%.6g|%.6g", sale.sale.height_cm, sale.sale.width_cm);
    return "key:" + sale.sale.artist_id + "|" + normalize_title(sale.sale.title) + "|" + dims;
}

namespace {

std::optional<double> avg_return_of(const std::vector<AdjustedSale>& sales) {
    auto levels = annual_avg_apv(sales);
    if (levels.size() < 2) return std::nullopt;
    return return_series(std::move(levels)).summary.avg_return;
}

std::vector<double> apvs_of(const std::vector<AdjustedSale>& sales) {
    std::vector<double> out;
    out.reserve(sales.size());
    for (const AdjustedSale& s : sales) out.push_back(s.apv);
    return out;
}

}  // namespace

RepeatSalesResult repeat_sales_subset(const std::vector<AdjustedSale>& sales,
                                      const RepeatMatcher& matcher,
                                      const MedianSeEstimator& estimator,
                                      const SignificanceThresholds& thresholds) {
    std::vector<std::string> keys;
    keys.reserve(sales.size());
    std::unordered_map<std::string, std::size_t> counts;
    for (const AdjustedSale& s : sales) {
        keys.push_back(matcher(s));
        ++counts[keys.back()];
    }

    RepeatSalesResult out;
    for (std::size_t i = 0; i < sales.size(); ++i) {
        if (counts[keys[i]] >= 2) out.subset.push_back(sales[i]);
    }
    out.report.no_repeats = out.subset.empty();

    std::map<std::string, std::pair<std::vector<AdjustedSale>, std::vector<AdjustedSale>>> by_artist;
    for (const AdjustedSale& s : sales) by_artist[s.sale.artist_id].first.push_back(s);
    for (const AdjustedSale& s : out.subset) by_artist[s.sale.artist_id].second.push_back(s);

    for (const auto& [artist, groups] : by_artist) {
        const auto& [all, repeat] = groups;
        RepeatSalesRow row;
        row.artist_id = artist;
        const std::vector<double> all_apv = apvs_of(all);
        const std::vector<double> rep_apv = apvs_of(repeat);
        row.all_n = all.size();
        row.all_median = median(all_apv);
        row.all_avg_return = avg_return_of(all);
        row.repeat_n = repeat.size();
        if (!repeat.empty()) row.repeat_median = median(rep_apv);
        row.repeat_avg_return = avg_return_of(repeat);
        if (all.size() >= estimator.min_n() && repeat.size() >= estimator.min_n()) {
            try {
                row.all_vs_repeat = median_diff_test(all_apv, rep_apv, estimator, thresholds);
            } catch (const DegenerateInference&) {
            }
        }
        out.report.rows.push_back(std::move(row));
    }
    return out;
}

bool index_qualifies(const AdjustedSale& sale, const IndexRule& rule) {
    if (sale.real_premium_price <= rule.min_price) return false;
    return rule.universe.empty() || rule.universe.contains(sale.sale.artist_id);
}

IndexSeries apv_index(const std::vector<AdjustedSale>& sales, const IndexRule& rule) {
    if (rule.window_months < 1) throw DomainError("index window must be at least one month");
    IndexSeries out;
    out.rule = rule;

    std::map<int, std::pair<double, std::size_t>> by_month;
    for (const AdjustedSale& s : sales) {
        if (!index_qualifies(s, rule)) continue;
        auto& [sum, n] = by_month[s.sale.sale_date.ordinal()];
        sum += s.apv;
        ++n;
    }
    if (by_month.empty() && !(rule.first && rule.last)) return out;

    const int first = rule.first ? rule.first->ordinal() : by_month.begin()->first;
    const int last = rule.last ? rule.last->ordinal()
                               : by_month.rbegin()->first + rule.window_months - 1;
    for (int m = first; m <= last; ++m) {
        double sum = 0.0;
        std::size_t n = 0;
        for (auto it = by_month.lower_bound(m - rule.window_months + 1);
             it != by_month.end() && it->first <= m; ++it) {
            sum += it->second.first;
            n += it->second.second;
        }
        IndexPoint p;
        p.month = YearMonth::from_ordinal(m);
        p.n_contributing = n;
        if (n > 0) p.level = sum / static_cast<double>(n);
        out.points.push_back(p);
    }
    return out;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw DomainError("correlation inputs differ in length");
    if (x.size() < 2) throw InsufficientData("correlation needs at least two pairs");
    const double mx = mean(x);
    const double my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) throw DomainError("correlation undefined for a constant series");
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace apv
