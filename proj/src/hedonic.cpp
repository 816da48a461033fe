#include "apv/hedonic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_map>

#include "apv/csv.hpp"
#include "apv/descriptive.hpp"
#include "apv/distributions.hpp"
#include "apv/error.hpp"

namespace apv {

const char* geometry_name(Geometry g) {
    switch (g) {
        case Geometry::area: return "area";
        case Geometry::height: return "height";
        case Geometry::width: return "width";
        case Geometry::aspect_ratio: return "aspect_ratio";
        case Geometry::diagonal: return "diagonal";
    }
    return "?";
}

double geometry_value(Geometry g, double h, double w) {
    switch (g) {
        case Geometry::area: return h * w;
        case Geometry::height: return h;
        case Geometry::width: return w;
        case Geometry::aspect_ratio: return h / w;
        case Geometry::diagonal: return std::hypot(h, w);
    }
    return 0.0;
}

void DesignSpec::apply_degrees(const std::string& text) {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = csv::trim(item);
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw DomainError("degree setting must be term=degree: '" + item + "'");
        const std::string term = csv::trim(item.substr(0, eq));
        int degree = 0;
        try {
            degree = std::stoi(item.substr(eq + 1));
        } catch (const std::exception&) {
            throw DomainError("invalid degree in '" + item + "'");
        }
        if (degree < 0) throw DomainError("degree must be nonnegative in '" + item + "'");
        if (term == "age") {
            age_degree = degree;
            continue;
        }
        bool found = false;
        for (auto& [g, d] : geometry) {
            if (term == geometry_name(g)) {
                d = degree;
                found = true;
            }
        }
        if (!found) throw DomainError("unknown design term '" + term + "'");
    }
}

void DesignSpec::validate() const {
    if (age_degree < 0) throw DomainError("age degree must be nonnegative");
    for (const auto& [g, d] : geometry) {
        if (d < 0) throw DomainError(std::string("degree of ") + geometry_name(g) + " must be nonnegative");
    }
}

namespace {

std::string power_label(const std::string& base, int power) {
    return power == 1 ? base : base + "^" + std::to_string(power);
}

void add_column(DesignData& d, std::vector<double> values, std::string label, ColumnKind kind) {
    d.x.append_col(values);
    d.labels.push_back(std::move(label));
    d.kinds.push_back(kind);
}

}  // namespace

DesignData build_design_matrix(const std::vector<AdjustedSale>& sales,
                               const std::vector<ArtistRecord>& artists, const DesignSpec& spec) {
    spec.validate();
    std::unordered_map<std::string, const ArtistRecord*> by_id;
    for (const ArtistRecord& a : artists) by_id[a.artist_id] = &a;

    DesignData d;
    std::vector<const AdjustedSale*> rows;
    std::vector<double> ages;
    for (const AdjustedSale& s : sales) {
        if (spec.age_degree > 0) {
            const auto it = by_id.find(s.sale.artist_id);
            if (it == by_id.end()) {
                d.diagnostics.emplace_back(s.sale.sale_id, "artist missing from artist table");
                continue;
            }
            if (!s.sale.execution_year) {
                d.diagnostics.emplace_back(s.sale.sale_id, "missing execution_year");
                continue;
            }
            ages.push_back(static_cast<double>(*s.sale.execution_year - it->second->birth_year));
        }
        rows.push_back(&s);
        d.row_years.push_back(s.sale.sale_date.year);
        d.y.push_back(std::log(s.real_premium_price));
    }

    const std::set<int> year_set(d.row_years.begin(), d.row_years.end());
    if (year_set.size() < 2) throw InsufficientData("hedonic design needs at least two distinct sale years");
    d.years.assign(year_set.begin(), year_set.end());
    d.reference_year = spec.reference_year.value_or(d.years.front());
    if (!year_set.contains(*d.reference_year)) {
        throw DomainError("reference year " + std::to_string(*d.reference_year) + " has no sales");
    }

    const std::size_t n = rows.size();
    add_column(d, std::vector<double>(n, 1.0), "(intercept)", ColumnKind::intercept);

    for (int p = 1; p <= spec.age_degree; ++p) {
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = std::pow(ages[i], p);
        add_column(d, std::move(col), power_label("age", p), ColumnKind::continuous);
    }
    for (const auto& [g, degree] : spec.geometry) {
        for (int p = 1; p <= degree; ++p) {
            std::vector<double> col(n);
            for (std::size_t i = 0; i < n; ++i) {
                col[i] = std::pow(geometry_value(g, rows[i]->sale.height_cm, rows[i]->sale.width_cm), p);
            }
            add_column(d, std::move(col), power_label(geometry_name(g), p), ColumnKind::continuous);
        }
    }

    auto add_dummy = [&](std::vector<double> col, std::string label) {
        const bool constant = std::all_of(col.begin(), col.end(), [&](double v) { return v == col.front(); });
        if (constant && spec.drop_constant_dummies) {
            d.diagnostics.emplace_back(label, "constant dummy dropped");
            return;
        }
        add_column(d, std::move(col), std::move(label), ColumnKind::dummy);
    };

    if (spec.canvas_dummy) {
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = rows[i]->sale.is_canvas ? 1.0 : 0.0;
        add_dummy(std::move(col), "canvas");
    }
    for (Subject s : spec.subject_dummies) {
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = rows[i]->sale.subjects.get(s) ? 1.0 : 0.0;
        add_dummy(std::move(col), std::string("subject:") + subject_name(s));
    }
    if (spec.painter_dummies) {
        std::set<std::string> painters;
        for (const AdjustedSale* s : rows) painters.insert(s->sale.artist_id);
        if (painters.size() >= 2) {
            for (auto it = std::next(painters.begin()); it != painters.end(); ++it) {
                std::vector<double> col(n);
                for (std::size_t i = 0; i < n; ++i) col[i] = rows[i]->sale.artist_id == *it ? 1.0 : 0.0;
                add_dummy(std::move(col), "artist:" + *it);
            }
        }
    }
    for (int year : d.years) {
        if (year == *d.reference_year) continue;
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = d.row_years[i] == year ? 1.0 : 0.0;
        d.year_column[year] = d.labels.size();
        add_column(d, std::move(col), "year:" + std::to_string(year), ColumnKind::dummy);
    }
    return d;
}

std::optional<double> HedonicFit::coefficient(const std::string& label) const {
    const auto it = std::find(design.labels.begin(), design.labels.end(), label);
    if (it == design.labels.end()) return std::nullopt;
    return coefficients[static_cast<std::size_t>(it - design.labels.begin())];
}

namespace {

double column_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// Columns divided by their norms; zero columns keep scale 1.
linalg::Matrix scaled(const linalg::Matrix& x, std::vector<double>& scales) {
    linalg::Matrix out = x;
    scales.assign(x.cols(), 1.0);
    for (std::size_t c = 0; c < x.cols(); ++c) {
        const double nrm = column_norm(x.col(c));
        if (nrm > 0.0) scales[c] = nrm;
        for (double& v : out.col(c)) v /= scales[c];
    }
    return out;
}

double centered_ss(const std::vector<double>& y) {
    const double m = mean(y);
    double s = 0.0;
    for (double v : y) s += (v - m) * (v - m);
    return s;
}

std::string join_labels(const std::vector<std::string>& labels) {
    std::string out;
    for (const std::string& l : labels) {
        if (!out.empty()) out += ", ";
        out += l;
    }
    return out;
}

}  // namespace

HedonicFit ols_fit(DesignData design) {
    const std::size_t n = design.x.rows();
    const std::size_t p = design.x.cols();
    if (design.y.size() != n) throw DomainError("response length does not match design rows");
    if (design.labels.size() != p) throw DomainError("label count does not match design columns");
    if (n < p) {
        throw Underdetermined("under-determined design: " + std::to_string(n) + " rows for " +
                              std::to_string(p) + " columns");
    }

    std::vector<double> scales;
    const linalg::HouseholderQr qr(scaled(design.x, scales));
    if (!qr.full_rank()) {
        std::vector<std::string> names;
        for (std::size_t c : qr.dependency_set(qr.dependent().front())) names.push_back(design.labels[c]);
        throw RankDeficient(names, "rank-deficient design; dependent columns: " + join_labels(names));
    }

    const auto sol = qr.solve(design.y);
    HedonicFit fit;
    fit.n = n;
    const bool has_intercept =
        std::find(design.kinds.begin(), design.kinds.end(), ColumnKind::intercept) != design.kinds.end();
    fit.k = has_intercept ? p - 1 : p;
    fit.residuals = sol.residuals;
    fit.coefficients.resize(p);
    for (std::size_t c = 0; c < p; ++c) fit.coefficients[c] = sol.coefficients[c] / scales[c];

    double sse = 0.0;
    for (double e : fit.residuals) sse += e * e;
    double sst = 0.0;
    if (has_intercept) {
        sst = centered_ss(design.y);
    } else {
        for (double v : design.y) sst += v * v;
    }
    const double df_resid = static_cast<double>(n - p);
    fit.r2 = sst > 0.0 ? 1.0 - sse / sst : 0.0;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    fit.sigma2 = df_resid > 0 ? sse / df_resid : nan;
    fit.adj_r2 = df_resid > 0 ? 1.0 - (1.0 - fit.r2) * static_cast<double>(n - (has_intercept ? 1 : 0)) / df_resid
                              : nan;
    if (fit.k > 0 && df_resid > 0) {
        fit.f_stat = (fit.r2 / static_cast<double>(fit.k)) / ((1.0 - fit.r2) / df_resid);
        fit.f_p = fit.r2 >= 1.0 ? 0.0
                                : dist::survival(dist::DistSpec::fisher_f(static_cast<double>(fit.k), df_resid),
                                                 fit.f_stat);
    } else {
        fit.f_stat = nan;
        fit.f_p = nan;
    }

    const linalg::Matrix g = qr.inverse_gram();
    fit.std_errors.resize(p);
    fit.t_stats.resize(p);
    fit.p_values.resize(p);
    for (std::size_t c = 0; c < p; ++c) {
        fit.std_errors[c] = std::sqrt(fit.sigma2 * g(c, c)) / scales[c];
        fit.t_stats[c] = fit.coefficients[c] / fit.std_errors[c];
        fit.p_values[c] = df_resid > 0 && std::isfinite(fit.t_stats[c])
                              ? std::min(1.0, 2.0 * dist::survival(dist::DistSpec::student_t(df_resid),
                                                                   std::abs(fit.t_stats[c])))
                              : nan;
    }
    fit.design = std::move(design);
    return fit;
}

HedonicFit ols_fit(const linalg::Matrix& x, const std::vector<double>& y, const std::vector<std::string>& labels) {
    DesignData d;
    d.x = x;
    d.y = y;
    d.labels = labels;
    for (std::size_t c = 0; c < x.cols(); ++c) {
        const auto col = x.col(c);
        const bool ones = std::all_of(col.begin(), col.end(), [](double v) { return v == 1.0; });
        const bool binary =
            std::all_of(col.begin(), col.end(), [](double v) { return v == 0.0 || v == 1.0; });
        d.kinds.push_back(ones ? ColumnKind::intercept : binary ? ColumnKind::dummy : ColumnKind::continuous);
    }
    return ols_fit(std::move(d));
}

WhiteTestResult white_test(const HedonicFit& fit, bool cross_products) {
    const DesignData& d = fit.design;
    const std::size_t n = d.x.rows();

    std::vector<std::size_t> base;
    for (std::size_t c = 0; c < d.x.cols(); ++c) {
        if (d.kinds[c] != ColumnKind::intercept) base.push_back(c);
    }

    linalg::Matrix aux(n, 0);
    aux.append_col(std::vector<double>(n, 1.0));
    for (std::size_t c : base) aux.append_col(d.x.col(c));
    std::vector<double> buf(n);
    for (std::size_t c : base) {
        if (d.kinds[c] != ColumnKind::continuous) continue;
        for (std::size_t i = 0; i < n; ++i) buf[i] = d.x(i, c) * d.x(i, c);
        aux.append_col(buf);
    }
    if (cross_products) {
        for (std::size_t a = 0; a < base.size(); ++a) {
            for (std::size_t b = a + 1; b < base.size(); ++b) {
                for (std::size_t i = 0; i < n; ++i) buf[i] = d.x(i, base[a]) * d.x(i, base[b]);
                aux.append_col(buf);
            }
        }
    }

    std::vector<double> scales;
    const linalg::HouseholderQr qr(scaled(aux, scales));
    WhiteTestResult r;
    r.aux_regressors = qr.accepted().size() - 1;
    r.dropped_dependent = qr.dependent().size();
    r.df = static_cast<double>(r.aux_regressors);
    if (n < r.aux_regressors + 2) {
        throw InsufficientData("White test needs at least " + std::to_string(r.aux_regressors + 2) +
                               " observations, have " + std::to_string(n));
    }

    // Residuals at solver noise level carry no variance structure.
    if (column_norm(fit.residuals) <= 1e-9 * column_norm(d.y)) {
        r.statistic = 0.0;
        r.p_value = 1.0;
        return r;
    }

    std::vector<double> e2(n);
    for (std::size_t i = 0; i < n; ++i) e2[i] = fit.residuals[i] * fit.residuals[i];
    const auto sol = qr.solve(e2);
    double sse = 0.0;
    for (double e : sol.residuals) sse += e * e;
    const double sst = centered_ss(e2);
    const double r2 = sst > 0.0 ? std::max(0.0, 1.0 - sse / sst) : 0.0;
    r.statistic = static_cast<double>(n) * r2;
    r.p_value = r.df > 0 ? dist::survival(dist::DistSpec::chi_square(r.df), r.statistic) : 1.0;
    return r;
}

std::vector<YearCharacteristics> yearly_mean_characteristics(const DesignData& d) {
    std::vector<YearCharacteristics> out;
    const std::size_t p = d.x.cols();
    for (int year : d.years) {
        YearCharacteristics yc;
        yc.year = year;
        yc.mean_row.assign(p, 0.0);
        for (std::size_t i = 0; i < d.x.rows(); ++i) {
            if (d.row_years[i] != year) continue;
            ++yc.n;
            for (std::size_t c = 0; c < p; ++c) yc.mean_row[c] += d.x(i, c);
        }
        if (yc.n == 0) continue;
        for (double& v : yc.mean_row) v /= static_cast<double>(yc.n);
        for (const auto& [y, c] : d.year_column) yc.mean_row[c] = y == year ? 1.0 : 0.0;
        out.push_back(std::move(yc));
    }
    return out;
}

ReturnSeries representative_returns(const HedonicFit& fit, const std::vector<YearCharacteristics>& yearly) {
    std::vector<YearLevel> levels;
    for (const YearCharacteristics& yc : yearly) {
        if (yc.mean_row.size() != fit.coefficients.size()) {
            throw DomainError("yearly characteristics do not match the fitted design");
        }
        double log_price = 0.0;
        for (std::size_t c = 0; c < yc.mean_row.size(); ++c) log_price += yc.mean_row[c] * fit.coefficients[c];
        levels.push_back({yc.year, std::exp(log_price), yc.n});
    }
    return return_series(std::move(levels));
}

ReturnSeries time_dummy_returns(const HedonicFit& fit) {
    const DesignData& d = fit.design;
    if (!d.reference_year) throw DomainError("fit carries no sale-year dummies");
    std::vector<YearLevel> levels;
    for (int year : d.years) {
        double delta = 0.0;
        if (year != *d.reference_year) delta = fit.coefficients.at(d.year_column.at(year));
        const auto n = static_cast<std::size_t>(std::count(d.row_years.begin(), d.row_years.end(), year));
        levels.push_back({year, std::exp(delta), n});
    }
    ReturnSeries rs = return_series(std::move(levels));
    // exp(delta_{i+1} - delta_i) - 1 without the rounding of a ratio of exponentials
    for (YearReturn& r : rs.returns) {
        const auto delta_of = [&](int y) {
            return y == *d.reference_year ? 0.0 : fit.coefficients[d.year_column.at(y)];
        };
        r.value = std::expm1(delta_of(r.to_year) - delta_of(r.from_year));
    }
    return rs;
}

namespace {

SeriesMoments moments(const std::vector<double>& v) {
    SeriesMoments m;
    m.avg = mean(v);
    m.sd = v.size() >= 2 ? sample_sd(v) : 0.0;
    return m;
}

}  // namespace

ValidationReport validate_against_apv(const ReturnSeries& apv_returns, const ReturnSeries& hpm_returns,
                                      const ReturnSeries* market_returns) {
    std::map<int, double> hpm, market;
    for (const YearReturn& r : hpm_returns.returns) hpm[r.from_year] = r.value;
    if (market_returns) {
        for (const YearReturn& r : market_returns->returns) market[r.from_year] = r.value;
    }

    ValidationReport out;
    std::vector<double> a, h, ma, mm;
    for (const YearReturn& r : apv_returns.returns) {
        const auto it = hpm.find(r.from_year);
        if (it == hpm.end()) continue;
        a.push_back(r.value);
        h.push_back(it->second);
        out.pairs.push_back({r.from_year, {r.value, it->second}});
        if (const auto mt = market.find(r.from_year); mt != market.end()) {
            ma.push_back(r.value);
            mm.push_back(mt->second);
        }
    }
    out.n_overlap = a.size();
    if (a.size() < 3) {
        throw InsufficientData("validation needs at least 3 overlapping returns, have " + std::to_string(a.size()));
    }
    out.apv = moments(a);
    out.hpm = moments(h);
    out.correlation = pearson(a, h);
    if (market_returns && mm.size() >= 3) {
        out.market = moments(mm);
        out.market_correlation = pearson(ma, mm);
    }
    return out;
}

}  // namespace apv
