#include "apv/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <set>

#include "CLI11.hpp"
#include "apv/cohorts.hpp"
#include "apv/config.hpp"
#include "apv/csv.hpp"
#include "apv/descriptive.hpp"
#include "apv/error.hpp"
#include "apv/hedonic.hpp"
#include "apv/ingest.hpp"
#include "apv/median_inference.hpp"
#include "apv/report.hpp"
#include "apv/returns.hpp"
#include "apv/synthetic.hpp"
#include "json.hpp"

namespace apv::cli {

namespace {

using Json = nlohmann::ordered_json;

/// Flags that mirror RunConfig keys.
const std::vector<std::pair<std::string, std::string>> kConfigFlags = {
    {"--sales", "sales"},
    {"--cpi", "cpi"},
    {"--artists", "artists"},
    {"--out", "output_dir"},
    {"--base-month", "base_month"},
    {"--min-price", "min_price"},
    {"--min-apv", "min_apv"},
    {"--window-start", "window_start"},
    {"--window-end", "window_end"},
    {"--premium", "premium_schedule"},
    {"--degrees", "degrees"},
    {"--reference-year", "reference_year"},
    {"--canvas-dummy", "canvas_dummy"},
    {"--painter-dummies", "painter_dummies"},
    {"--subject-dummies", "subject_dummies"},
    {"--index-window", "index_window_months"},
    {"--index-min-price", "index_min_price"},
    {"--universe", "index_universe"},
    {"--threshold-strong", "threshold_strong"},
    {"--threshold-medium", "threshold_medium"},
    {"--threshold-weak", "threshold_weak"},
    {"--estimator", "estimator"},
    {"--cohort-min-side", "cohort_min_side"},
    {"--lifecycle-min-count", "lifecycle_min_count"},
    {"--lifecycle-window", "lifecycle_window"},
    {"--seed", "seed"},
};

struct Data {
    std::vector<AdjustedSale> sales;
    std::vector<ArtistRecord> artists;
    report::Report ingest;
};

std::ifstream open_input(const std::filesystem::path& path, const char* what) {
    if (path.empty()) throw IoError(std::string("no ") + what + " file configured");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(std::string("cannot read ") + what + " file '" + path.string() + "'");
    return in;
}

// Last month present in a year,month,cpi_level file.
YearMonth last_cpi_month(const std::filesystem::path& path) {
    auto in = open_input(path, "CPI");
    csv::Reader reader(in);
    std::vector<std::string> row;
    if (!reader.next(row)) throw SchemaError("CPI file is empty");
    std::optional<YearMonth> last;
    while (reader.next(row)) {
        if (row.size() < 2) continue;
        try {
            const YearMonth m{std::stoi(row[0]), std::stoi(row[1])};
            if (!last || *last < m) last = m;
        } catch (const std::exception&) {
            // parse_cpi_csv reports malformed rows
        }
    }
    if (!last) throw SchemaError("CPI file has no data rows");
    return *last;
}

Data load(const RunConfig& cfg, bool need_artists) {
    Data d;
    const YearMonth base = cfg.base_month.value_or(last_cpi_month(cfg.cpi_path));
    auto cpi_in = open_input(cfg.cpi_path, "CPI");
    const CpiTable cpi = parse_cpi_csv(cpi_in, base);

    auto sales_in = open_input(cfg.sales_path, "sales");
    const ParsedSales parsed = parse_sales_csv(sales_in, {}, &cfg.filter);
    std::vector<AdjustedSale> adjusted;
    adjusted.reserve(parsed.records.size());
    for (const SaleRecord& r : parsed.records) adjusted.push_back(to_real_premium(r, cpi, cfg.premium));
    FilterResult filtered = apply_filters(adjusted, cfg.filter);
    d.sales = std::move(filtered.kept);

    if (!cfg.artists_path.empty()) {
        auto artists_in = open_input(cfg.artists_path, "artists");
        d.artists = parse_artists_csv(artists_in);
    } else if (need_artists) {
        throw IoError("this command needs an artists file (--artists)");
    }

    d.ingest.command = "ingest";
    report::Table rejected{"rejected", {"row", "reason"}, {}};
    for (const RowDiagnostic& diag : parsed.diagnostics) {
        rejected.rows.push_back({report::cell(diag.row), diag.reason});
    }
    report::Table dropped{"dropped", {"sale_id", "reason"}, {}};
    std::map<std::string, std::size_t> by_reason;
    for (const DroppedSale& s : filtered.dropped) {
        dropped.rows.push_back({s.sale.sale.sale_id, s.reason});
        ++by_reason[s.reason];
    }
    report::Table counts{"counts", {"stage", "count"}, {}};
    counts.rows.push_back({std::string("rows_parsed"), report::cell(parsed.records.size())});
    counts.rows.push_back({std::string("rows_rejected"), report::cell(parsed.diagnostics.size())});
    for (const auto& [reason, n] : by_reason) counts.rows.push_back({"dropped: " + reason, report::cell(n)});
    counts.rows.push_back({std::string("sales_kept"), report::cell(d.sales.size())});
    d.ingest.tables = {std::move(counts), std::move(rejected), std::move(dropped)};
    d.ingest.notes.emplace_back("base_month", base.to_string());
    d.ingest.notes.emplace_back("premium_schedule", cfg.premium.to_string());
    return d;
}

std::vector<std::string> artist_ids(const std::vector<AdjustedSale>& sales) {
    std::set<std::string> ids;
    for (const AdjustedSale& s : sales) ids.insert(s.sale.artist_id);
    return {ids.begin(), ids.end()};
}

std::vector<AdjustedSale> of_artist(const std::vector<AdjustedSale>& sales, const std::string& id) {
    std::vector<AdjustedSale> out;
    for (const AdjustedSale& s : sales) {
        if (s.sale.artist_id == id) out.push_back(s);
    }
    return out;
}

std::vector<AdjustedSale> restrict(const std::vector<AdjustedSale>& sales, const std::vector<std::string>& ids) {
    if (ids.empty()) return sales;
    const std::set<std::string> keep(ids.begin(), ids.end());
    std::vector<AdjustedSale> out;
    for (const AdjustedSale& s : sales) {
        if (keep.contains(s.sale.artist_id)) out.push_back(s);
    }
    return out;
}

std::vector<std::string> selected_or_all(const std::vector<std::string>& chosen, const std::vector<AdjustedSale>& sales) {
    if (!chosen.empty()) {
        std::vector<std::string> out = chosen;
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }
    return artist_ids(sales);
}

std::vector<double> apvs(const std::vector<AdjustedSale>& sales) {
    std::vector<double> out;
    for (const AdjustedSale& s : sales) out.push_back(s.apv);
    return out;
}

void require_sales(const std::vector<AdjustedSale>& sales, const std::string& what) {
    if (sales.empty()) throw InsufficientData("no sales left for " + what + " after filtering");
}

struct Options {
    std::string config_path;
    std::vector<std::string> settings;
    std::map<std::string, std::string> flags;
    std::vector<std::string> artists;
    bool no_cross_products = false;
    std::string synth_dir;
    int synth_first_year = 1985;
    int synth_last_year = 2012;
};

report::Report cmd_describe(const Data& d, const Options& o) {
    std::vector<std::pair<std::string, SummaryStats>> blocks;
    const auto ids = selected_or_all(o.artists, d.sales);
    for (const std::string& id : ids) {
        const auto sales = of_artist(d.sales, id);
        if (sales.empty()) throw InsufficientData("no sales for artist '" + id + "'");
        blocks.emplace_back(id, describe(apvs(sales)));
    }
    const auto pooled = restrict(d.sales, o.artists);
    require_sales(pooled, "describe");
    if (ids.size() > 1) blocks.emplace_back("all", describe(apvs(pooled)));
    return report::describe_report(blocks);
}

report::Report cmd_compare(const Data& d, const Options& o, const RunConfig& cfg) {
    std::vector<LabeledSample> groups;
    for (const std::string& id : selected_or_all(o.artists, d.sales)) {
        groups.emplace_back(id, apvs(of_artist(d.sales, id)));
    }
    return report::matrix_report(
        pairwise_median_matrix(groups, median_se_by_name(cfg.estimator), cfg.thresholds));
}

report::Report cmd_cohorts(const Data& d, const Options& o, const RunConfig& cfg) {
    CohortOptions opt;
    opt.min_side = cfg.cohort_min_side;
    opt.estimator = &median_se_by_name(cfg.estimator);
    opt.thresholds = cfg.thresholds;
    std::vector<std::pair<std::string, std::vector<AdjustedSale>>> scopes;
    const auto pooled = restrict(d.sales, o.artists);
    require_sales(pooled, "cohorts");
    scopes.emplace_back("all", pooled);
    for (const std::string& id : selected_or_all(o.artists, d.sales)) scopes.emplace_back(id, of_artist(d.sales, id));
    std::vector<std::pair<std::string, CohortComparison>> rows;
    for (const auto& [scope, sales] : scopes) {
        for (Subject s : kAllSubjects) rows.emplace_back(scope, subject_comparison(sales, s, opt));
        rows.emplace_back(scope, orientation_comparison(sales, opt));
    }
    return report::cohorts_report(rows);
}

report::Report cmd_lifecycle(const Data& d, const Options& o, const RunConfig& cfg) {
    std::map<std::string, const ArtistRecord*> by_id;
    for (const ArtistRecord& a : d.artists) by_id[a.artist_id] = &a;
    std::vector<LifecycleCurve> curves;
    report::Report r;
    const bool explicit_choice = !o.artists.empty();
    for (const std::string& id : selected_or_all(o.artists, d.sales)) {
        const auto it = by_id.find(id);
        if (it == by_id.end()) {
            if (explicit_choice) throw SchemaError("artist '" + id + "' is missing from the artists file");
            r.notes.emplace_back("skipped:" + id, "missing from the artists file");
            continue;
        }
        try {
            curves.push_back(lifecycle_curve(d.sales, *it->second, cfg.lifecycle));
        } catch (const InsufficientData& e) {
            if (explicit_choice) throw;
            r.notes.emplace_back("skipped:" + id, e.what());
        }
    }
    if (curves.empty()) throw InsufficientData("no artist has enough dated sales for a life-cycle curve");
    report::Report built = report::lifecycle_report(curves);
    built.notes.insert(built.notes.end(), r.notes.begin(), r.notes.end());
    return built;
}

report::Report cmd_returns(const Data& d, const Options& o) {
    std::vector<std::pair<std::string, ReturnSeries>> all;
    const auto ids = selected_or_all(o.artists, d.sales);
    for (const std::string& id : ids) all.emplace_back(id, return_series(annual_avg_apv(of_artist(d.sales, id))));
    if (ids.size() > 1) all.emplace_back("all", return_series(annual_avg_apv(restrict(d.sales, o.artists))));
    return report::returns_report(all);
}

report::Report cmd_repeat(const Data& d, const Options& o, const RunConfig& cfg) {
    const auto sales = restrict(d.sales, o.artists);
    require_sales(sales, "repeat-sales");
    const auto result =
        repeat_sales_subset(sales, default_repeat_key, median_se_by_name(cfg.estimator), cfg.thresholds);
    return report::repeat_sales_report(result.report);
}

report::Report cmd_hpm(const Data& d, const Options& o, const RunConfig& cfg) {
    const auto sales = restrict(d.sales, o.artists);
    require_sales(sales, "hpm");
    report::HpmOutcome out{ols_fit(build_design_matrix(sales, d.artists, cfg.design)), std::nullopt, true, {}, {},
                           std::nullopt, std::nullopt};
    report::Report notes;
    try {
        out.white = white_test(out.fit, !o.no_cross_products);
        out.white_cross_products = !o.no_cross_products;
    } catch (const InsufficientData& e) {
        if (o.no_cross_products) throw;
        out.white = white_test(out.fit, false);
        out.white_cross_products = false;
        notes.notes.emplace_back("white_test", std::string("cross products dropped: ") + e.what());
    }
    out.representative = representative_returns(out.fit, yearly_mean_characteristics(out.fit.design));
    out.market = time_dummy_returns(out.fit);
    try {
        std::set<std::string> used;
        std::vector<AdjustedSale> in_fit;
        for (const auto& [item, reason] : out.fit.design.diagnostics) used.insert(item);
        for (const AdjustedSale& s : sales) {
            if (!used.contains(s.sale.sale_id)) in_fit.push_back(s);
        }
        out.apv = return_series(annual_avg_apv(in_fit));
        out.validation = validate_against_apv(*out.apv, out.representative, &out.market);
    } catch (const InsufficientData& e) {
        notes.notes.emplace_back("validation", e.what());
    }
    report::Report r = report::hpm_report(out);
    r.notes.insert(r.notes.end(), notes.notes.begin(), notes.notes.end());
    return r;
}

report::Report cmd_index(const Data& d, const RunConfig& cfg) {
    require_sales(d.sales, "index");
    return report::index_report(apv_index(d.sales, cfg.index));
}

const char* error_kind(const std::exception& e) {
    if (dynamic_cast<const RankDeficient*>(&e)) return "rank_deficient";
    if (dynamic_cast<const Underdetermined*>(&e)) return "underdetermined";
    if (dynamic_cast<const InsufficientData*>(&e)) return "insufficient_data";
    if (dynamic_cast<const CoverageError*>(&e)) return "cpi_coverage";
    if (dynamic_cast<const SchemaError*>(&e)) return "schema";
    if (dynamic_cast<const IoError*>(&e)) return "io";
    if (dynamic_cast<const DegenerateInference*>(&e)) return "degenerate_inference";
    if (dynamic_cast<const DomainError*>(&e)) return "domain";
    if (dynamic_cast<const Error*>(&e)) return "error";
    return "internal";
}

Json error_json(const std::string& command, const std::string& kind, const std::string& message, int code) {
    Json j;
    j["status"] = "error";
    j["command"] = command;
    j["exit_code"] = code;
    j["error"] = kind;
    j["message"] = message;
    return j;
}

void report_error(const Json& j, std::ostream& err, const std::filesystem::path& out_dir) {
    err << j.dump() << '\n';
    if (out_dir.empty()) return;
    std::error_code ec;
    if (!std::filesystem::is_directory(out_dir, ec)) return;
    std::ofstream f(out_dir / "error.json", std::ios::binary | std::ios::trunc);
    if (f) f << j.dump(2) << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"APV art-market analytics: price per area, cohorts, returns and hedonic validation", "apv"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--config", o.config_path, std::string("config file (key = value); default from $") + kConfigEnvVar);
    app.add_option("--set", o.settings, "override any config key, as key=value");
    for (const auto& [flag, key] : kConfigFlags) {
        app.add_option_function<std::string>(flag, [&o, key = key](const std::string& v) { o.flags[key] = v; },
                                             "config key " + key);
    }

    const auto add_artists = [&o](CLI::App* sub, const char* help) {
        sub->add_option("--artist", o.artists, help);
    };
    auto* describe_cmd = app.add_subcommand("describe", "descriptive APV statistics per artist");
    add_artists(describe_cmd, "artist ids (default: all)");
    auto* compare_cmd = app.add_subcommand("compare-artists", "pairwise median-difference matrix");
    add_artists(compare_cmd, "artist ids (default: all)");
    auto* cohorts_cmd = app.add_subcommand("cohorts", "subject and orientation cohort comparisons");
    add_artists(cohorts_cmd, "artist ids (default: all)");
    auto* lifecycle_cmd = app.add_subcommand("lifecycle", "median APV by age at execution");
    add_artists(lifecycle_cmd, "artist ids (default: all with enough dated sales)");
    auto* returns_cmd = app.add_subcommand("returns", "annual average APV levels and returns");
    add_artists(returns_cmd, "artist ids (default: all)");
    auto* repeat_cmd = app.add_subcommand("repeat-sales", "all sales versus the repeat-sales subset");
    add_artists(repeat_cmd, "artist ids (default: all)");
    auto* hpm_cmd = app.add_subcommand("hpm", "hedonic fit, White test and validation against APV returns");
    add_artists(hpm_cmd, "artist ids (default: all)");
    hpm_cmd->add_flag("--no-cross-products", o.no_cross_products, "White test without cross products");
    app.add_subcommand("index", "monthly trailing-window APV index");
    auto* synth_cmd = app.add_subcommand("synth", "write the synthetic example dataset");
    synth_cmd->add_option("--dir", o.synth_dir, "target directory")->required();
    synth_cmd->add_option("--first-year", o.synth_first_year, "first sale year");
    synth_cmd->add_option("--last-year", o.synth_last_year, "last sale year");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << error_json("", "usage", e.what(), kExitUsage).dump() << '\n';
        return kExitUsage;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    RunConfig cfg;
    try {
        std::string config_path = o.config_path;
        if (config_path.empty()) {
            if (const char* env = std::getenv(kConfigEnvVar); env && *env) config_path = env;
        }
        if (!config_path.empty()) apply_config_file(cfg, config_path);
        for (const auto& [key, value] : o.flags) cfg.set(key, value);
        for (const std::string& kv : o.settings) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw SchemaError("--set expects key=value, got '" + kv + "'");
            cfg.set(csv::trim(kv.substr(0, eq)), kv.substr(eq + 1));
        }
        cfg.validate();
    } catch (const std::exception& e) {
        err << error_json(command, std::string("config:") + error_kind(e), e.what(), kExitUsage).dump() << '\n';
        return kExitUsage;
    }

    try {
        std::vector<std::filesystem::path> written;
        if (command == "synth") {
            synthetic::Options so;
            so.seed = cfg.seed;
            so.first_year = o.synth_first_year;
            so.last_year = o.synth_last_year;
            written = synthetic::write_dataset(synthetic::generate(so), o.synth_dir);
        } else {
            const bool need_artists = command == "lifecycle" || command == "hpm";
            const Data d = load(cfg, need_artists);
            report::Report r;
            if (command == "describe") r = cmd_describe(d, o);
            else if (command == "compare-artists") r = cmd_compare(d, o, cfg);
            else if (command == "cohorts") r = cmd_cohorts(d, o, cfg);
            else if (command == "lifecycle") r = cmd_lifecycle(d, o, cfg);
            else if (command == "returns") r = cmd_returns(d, o);
            else if (command == "repeat-sales") r = cmd_repeat(d, o, cfg);
            else if (command == "hpm") r = cmd_hpm(d, o, cfg);
            else r = cmd_index(d, cfg);

            const report::RunStamp stamp{config_digest(cfg), cfg.seed};
            written = report::emit_all(r, cfg.output_dir, stamp);
            const auto ingest_files = report::emit_report(d.ingest, report::Format::csv, cfg.output_dir, stamp);
            written.insert(written.end(), ingest_files.begin(), ingest_files.end());
        }
        Json ok;
        ok["status"] = "ok";
        ok["command"] = command;
        Json files = Json::array();
        for (const auto& p : written) files.push_back(p.filename().string());
        ok["files"] = files;
        out << ok.dump() << '\n';
        return kExitOk;
    } catch (const std::exception& e) {
        report_error(error_json(command, error_kind(e), e.what(), kExitDataError), err,
                     command == "synth" ? std::filesystem::path{} : cfg.output_dir);
        return kExitDataError;
    }
}

}  // namespace apv::cli
