#include "apv/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

#include "apv/csv.hpp"
#include "apv/error.hpp"
#include "apv/report.hpp"

namespace apv {

namespace {

double parse_double(const std::string& key, const std::string& value) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw DomainError("config " + key + ": not a number '" + value + "'");
    }
    return v;
}

template <typename Int>
Int parse_int(const std::string& key, const std::string& value) {
    Int v{};
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw DomainError("config " + key + ": not an integer '" + value + "'");
    }
    return v;
}

bool parse_flag(const std::string& key, const std::string& value) {
    if (value == "true" || value == "yes" || value == "1") return true;
    if (value == "false" || value == "no" || value == "0") return false;
    throw DomainError("config " + key + ": expected true or false, got '" + value + "'");
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::string item;
    for (char c : value + ",") {
        if (c == ',' || c == ' ' || c == '\t') {
            if (!item.empty()) out.push_back(item);
            item.clear();
        } else {
            item += c;
        }
    }
    return out;
}

std::filesystem::path resolve(const std::string& value, const std::filesystem::path& base_dir) {
    std::filesystem::path p(value);
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    return p.lexically_normal();
}

std::string degrees_string(const DesignSpec& d) {
    std::string out = "age=" + std::to_string(d.age_degree);
    for (const auto& [g, degree] : d.geometry) out += std::string(",") + geometry_name(g) + "=" + std::to_string(degree);
    return out;
}

const std::vector<std::string> kKeys = {
    "sales",           "cpi",           "artists",          "output_dir",          "base_month",
    "min_price",       "min_apv",       "window_start",     "window_end",          "premium_schedule",
    "degrees",         "reference_year", "canvas_dummy",    "painter_dummies",     "subject_dummies",
    "index_window_months", "index_min_price", "index_universe", "threshold_strong", "threshold_medium",
    "threshold_weak",  "estimator",     "cohort_min_side",  "lifecycle_min_count", "lifecycle_window",
    "seed"};

}  // namespace

const std::vector<std::string>& RunConfig::keys() { return kKeys; }

void RunConfig::set(const std::string& key, const std::string& raw, const std::filesystem::path& base_dir) {
    const std::string value = csv::trim(raw);
    if (key == "sales") {
        sales_path = resolve(value, base_dir);
    } else if (key == "cpi") {
        cpi_path = resolve(value, base_dir);
    } else if (key == "artists") {
        artists_path = resolve(value, base_dir);
    } else if (key == "output_dir") {
        output_dir = resolve(value, base_dir);
    } else if (key == "base_month") {
        base_month = YearMonth::parse(value);
    } else if (key == "min_price") {
        filter.min_price = parse_double(key, value);
    } else if (key == "min_apv") {
        filter.min_apv = parse_double(key, value);
    } else if (key == "window_start") {
        filter.window_start = YearMonth::parse(value);
    } else if (key == "window_end") {
        filter.window_end = YearMonth::parse(value);
    } else if (key == "premium_schedule") {
        premium = PremiumSchedule::parse(value);
    } else if (key == "degrees") {
        design.apply_degrees(value);
    } else if (key == "reference_year") {
        design.reference_year = parse_int<int>(key, value);
    } else if (key == "canvas_dummy") {
        design.canvas_dummy = parse_flag(key, value);
    } else if (key == "painter_dummies") {
        design.painter_dummies = parse_flag(key, value);
    } else if (key == "subject_dummies") {
        design.subject_dummies.clear();
        if (value == "all") {
            design.subject_dummies.assign(std::begin(kAllSubjects), std::end(kAllSubjects));
        } else if (value != "none") {
            for (const std::string& name : split_list(value)) {
                const auto s = subject_from_name(name);
                if (!s) throw DomainError("config subject_dummies: unknown subject '" + name + "'");
                design.subject_dummies.push_back(*s);
            }
        }
    } else if (key == "index_window_months") {
        index.window_months = parse_int<int>(key, value);
    } else if (key == "index_min_price") {
        index.min_price = parse_double(key, value);
    } else if (key == "index_universe") {
        index.universe.clear();
        if (value != "all") {
            for (const std::string& a : split_list(value)) index.universe.insert(a);
        }
    } else if (key == "threshold_strong") {
        thresholds.strong = parse_double(key, value);
    } else if (key == "threshold_medium") {
        thresholds.medium = parse_double(key, value);
    } else if (key == "threshold_weak") {
        thresholds.weak = parse_double(key, value);
    } else if (key == "estimator") {
        (void)median_se_by_name(value);
        estimator = value;
    } else if (key == "cohort_min_side") {
        cohort_min_side = parse_int<std::size_t>(key, value);
    } else if (key == "lifecycle_min_count") {
        lifecycle.min_count = parse_int<std::size_t>(key, value);
    } else if (key == "lifecycle_window") {
        lifecycle.window = parse_int<int>(key, value);
    } else if (key == "seed") {
        seed = parse_int<std::uint64_t>(key, value);
    } else {
        throw SchemaError("unknown config key '" + key + "'");
    }
}

void RunConfig::validate() const {
    filter.validate();
    design.validate();
    if (index.window_months < 1) throw DomainError("index_window_months must be at least 1");
    if (!(thresholds.strong > 0.0 && thresholds.strong < thresholds.medium && thresholds.medium < thresholds.weak &&
          thresholds.weak < 1.0)) {
        throw DomainError("significance thresholds must satisfy 0 < strong < medium < weak < 1");
    }
    if (cohort_min_side < 1) throw DomainError("cohort_min_side must be positive");
    if (lifecycle.min_count < 1) throw DomainError("lifecycle_min_count must be positive");
    if (lifecycle.window < 1 || lifecycle.window % 2 == 0) throw DomainError("lifecycle_window must be odd");
    (void)median_se_by_name(estimator);
}

std::string RunConfig::canonical() const {
    std::map<std::string, std::string> kv;
    const auto num = [](double v) { return report::format_number(v); };
    kv["base_month"] = base_month ? base_month->to_string() : "auto";
    kv["min_price"] = num(filter.min_price);
    kv["min_apv"] = num(filter.min_apv);
    kv["window_start"] = filter.window_start ? filter.window_start->to_string() : "none";
    kv["window_end"] = filter.window_end ? filter.window_end->to_string() : "none";
    kv["premium_schedule"] = premium.to_string();
    kv["degrees"] = degrees_string(design);
    kv["reference_year"] = design.reference_year ? std::to_string(*design.reference_year) : "auto";
    kv["canvas_dummy"] = design.canvas_dummy ? "true" : "false";
    kv["painter_dummies"] = design.painter_dummies ? "true" : "false";
    std::string subjects;
    for (Subject s : design.subject_dummies) subjects += (subjects.empty() ? "" : ",") + std::string(subject_name(s));
    kv["subject_dummies"] = subjects.empty() ? "none" : subjects;
    kv["index_window_months"] = std::to_string(index.window_months);
    kv["index_min_price"] = num(index.min_price);
    std::string universe;
    for (const auto& a : index.universe) universe += (universe.empty() ? "" : ",") + a;
    kv["index_universe"] = universe.empty() ? "all" : universe;
    kv["threshold_strong"] = num(thresholds.strong);
    kv["threshold_medium"] = num(thresholds.medium);
    kv["threshold_weak"] = num(thresholds.weak);
    kv["estimator"] = estimator;
    kv["cohort_min_side"] = std::to_string(cohort_min_side);
    kv["lifecycle_min_count"] = std::to_string(lifecycle.min_count);
    kv["lifecycle_window"] = std::to_string(lifecycle.window);
    kv["seed"] = std::to_string(seed);
    std::string out;
    for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
    return out;
}

void apply_config_file(RunConfig& cfg, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file '" + path.string() + "'");
    const std::filesystem::path base_dir = path.parent_path();
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string text = csv::trim(line);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw SchemaError(path.string() + ":" + std::to_string(line_no) + ": expected key = value");
        }
        cfg.set(csv::trim(text.substr(0, eq)), text.substr(eq + 1), base_dir);
    }
}

RunConfig load_config(const std::filesystem::path& path) {
    RunConfig cfg;
    apply_config_file(cfg, path);
    return cfg;
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string config_digest(const RunConfig& cfg) {
    std::string material = cfg.canonical();
    for (const auto* p : {&cfg.sales_path, &cfg.cpi_path, &cfg.artists_path}) {
        if (p->empty()) continue;
        std::ifstream in(*p, std::ios::binary);
        if (!in) continue;
        const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        material += fnv1a_hex(bytes) + "\n";
    }
    return fnv1a_hex(material);
}

}  // namespace apv
