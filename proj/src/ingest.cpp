#include "apv/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <sstream>
#include <unordered_map>

#include "apv/csv.hpp"
#include "apv/descriptive.hpp"
#include "apv/error.hpp"

namespace apv {

YearMonth YearMonth::from_ordinal(int ordinal) {
    const int year = ordinal >= 0 ? ordinal / 12 : (ordinal - 11) / 12;
    return {year, ordinal - year * 12 + 1};
}

std::string YearMonth::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d", year, month);
    return buf;
}

YearMonth YearMonth::parse(const std::string& text) {
    const std::string t = csv::trim(text);
    int year = 0, month = 0;
    const auto dash = t.find('-');
    if (dash == std::string::npos) throw DomainError("expected YYYY-MM, got '" + t + "'");
    const auto r1 = std::from_chars(t.data(), t.data() + dash, year);
    const auto r2 = std::from_chars(t.data() + dash + 1, t.data() + t.size(), month);
    if (r1.ec != std::errc{} || r1.ptr != t.data() + dash || r2.ec != std::errc{} ||
        r2.ptr != t.data() + t.size() || month < 1 || month > 12) {
        throw DomainError("expected YYYY-MM, got '" + t + "'");
    }
    return {year, month};
}

const char* subject_name(Subject s) {
    switch (s) {
        case Subject::still_life: return "still_life";
        case Subject::landscape_subject: return "landscape_subject";
        case Subject::people: return "people";
        case Subject::nude: return "nude";
        case Subject::flowers: return "flowers";
    }
    return "?";
}

std::optional<Subject> subject_from_name(const std::string& name) {
    for (Subject s : kAllSubjects) {
        if (name == subject_name(s)) return s;
    }
    if (name == "landscape") return Subject::landscape_subject;
    return std::nullopt;
}

bool SubjectFlags::get(Subject s) const {
    switch (s) {
        case Subject::still_life: return still_life;
        case Subject::landscape_subject: return landscape_subject;
        case Subject::people: return people;
        case Subject::nude: return nude;
        case Subject::flowers: return flowers;
    }
    return false;
}

void SubjectFlags::set(Subject s, bool value) {
    switch (s) {
        case Subject::still_life: still_life = value; break;
        case Subject::landscape_subject: landscape_subject = value; break;
        case Subject::people: people = value; break;
        case Subject::nude: nude = value; break;
        case Subject::flowers: flowers = value; break;
    }
}

// ---------------------------------------------------------------------------
// CpiTable

CpiTable::CpiTable(YearMonth base_month, std::map<YearMonth, double> levels)
    : base_(base_month), levels_(std::move(levels)) {
    for (const auto& [month, level] : levels_) {
        if (!(level > 0.0) || !std::isfinite(level)) {
            throw DomainError("CPI level for " + month.to_string() + " must be positive");
        }
    }
    if (!levels_.contains(base_)) {
        throw CoverageError(base_.year, base_.month,
                            "CPI table lacks the base month " + base_.to_string());
    }
}

double CpiTable::deflator(YearMonth m) const {
    const auto it = levels_.find(m);
    if (it == levels_.end()) {
        throw CoverageError(m.year, m.month, "no CPI level for " + m.to_string());
    }
    return levels_.at(base_) / it->second;
}

void CpiTable::require_contiguous(YearMonth first, YearMonth last) const {
    for (int o = first.ordinal(); o <= last.ordinal(); ++o) {
        const YearMonth m = YearMonth::from_ordinal(o);
        if (!covers(m)) throw CoverageError(m.year, m.month, "CPI gap at " + m.to_string());
    }
}

// ---------------------------------------------------------------------------
// PremiumSchedule

PremiumSchedule::PremiumSchedule(std::vector<Tier> tiers) : tiers_(std::move(tiers)) {
    if (tiers_.empty()) throw DomainError("premium schedule needs at least one tier");
    for (std::size_t i = 0; i < tiers_.size(); ++i) {
        if (!(tiers_[i].rate >= 0.0 && tiers_[i].rate < 1.0)) {
            throw DomainError("premium rate must lie in [0, 1)");
        }
        if (i > 0 && !(tiers_[i].upper_bound > tiers_[i - 1].upper_bound)) {
            throw DomainError("premium tier bounds must strictly increase");
        }
    }
    if (!std::isinf(tiers_.back().upper_bound) || tiers_.back().upper_bound < 0) {
        throw DomainError("last premium tier must be unbounded");
    }
}

PremiumSchedule PremiumSchedule::flat(double rate) {
    return PremiumSchedule({{std::numeric_limits<double>::infinity(), rate}});
}

namespace {

double parse_double(const std::string& text, const char* what) {
    const std::string t = csv::trim(text);
    if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
    double value = 0.0;
    const auto r = std::from_chars(t.data(), t.data() + t.size(), value);
    if (t.empty() || r.ec != std::errc{} || r.ptr != t.data() + t.size()) {
        throw DomainError(std::string("invalid number for ") + what + ": '" + t + "'");
    }
    return value;
}

}  // namespace

PremiumSchedule PremiumSchedule::parse(const std::string& text) {
    if (text.find(':') == std::string::npos) return flat(parse_double(text, "premium rate"));
    std::vector<Tier> tiers;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw DomainError("premium tier must be bound:rate");
        tiers.push_back({parse_double(item.substr(0, colon), "premium bound"),
                         parse_double(item.substr(colon + 1), "premium rate")});
    }
    return PremiumSchedule(std::move(tiers));
}

double PremiumSchedule::rate(double hammer) const {
    for (const Tier& t : tiers_) {
        if (hammer <= t.upper_bound) return t.rate;
    }
    return tiers_.back().rate;
}

std::string PremiumSchedule::to_string() const {
    std::string out;
    char buf[64];
    for (const Tier& t : tiers_) {
        if (!out.empty()) out += ",";
        if (std::isinf(t.upper_bound)) {
            std::snprintf(buf, sizeof buf, "inf:%.6g", t.rate);
        } else {
            std::snprintf(buf, sizeof buf, "%.6g:%.6g", t.upper_bound, t.rate);
        }
        out += buf;
    }
    return out;
}

// ---------------------------------------------------------------------------
// FilterConfig

bool FilterConfig::in_window(YearMonth m) const {
    if (window_start && m < *window_start) return false;
    if (window_end && m > *window_end) return false;
    return true;
}

void FilterConfig::validate() const {
    if (!(min_price > 0.0)) throw DomainError("min_price must be positive");
    if (!(min_apv > 0.0)) throw DomainError("min_apv must be positive");
    if (window_start && window_end && *window_end < *window_start) {
        throw DomainError("analysis window ends before it starts");
    }
}

// ---------------------------------------------------------------------------
// CSV parsing

namespace {

class HeaderIndex {
public:
    explicit HeaderIndex(const std::vector<std::string>& header) {
        for (std::size_t i = 0; i < header.size(); ++i) index_[csv::trim(header[i])] = i;
    }

    std::size_t require(const std::string& name) const {
        const auto it = index_.find(name);
        if (it == index_.end()) throw SchemaError("missing mandatory column '" + name + "'");
        return it->second;
    }

    std::optional<std::size_t> find(const std::string& name) const {
        const auto it = index_.find(name);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

private:
    std::unordered_map<std::string, std::size_t> index_;
};

// Thrown for a malformed row; becomes a diagnostic.
struct RowError {
    std::string reason;
};

std::string field_at(const std::vector<std::string>& row, std::size_t i) {
    return i < row.size() ? csv::trim(row[i]) : std::string();
}

std::string field_at(const std::vector<std::string>& row, std::optional<std::size_t> i) {
    return i ? field_at(row, *i) : std::string();
}

std::optional<double> optional_number(const std::string& text, const char* what) {
    if (text.empty()) return std::nullopt;
    double value = 0.0;
    const auto r = std::from_chars(text.data(), text.data() + text.size(), value);
    if (r.ec != std::errc{} || r.ptr != text.data() + text.size() || !std::isfinite(value)) {
        throw RowError{std::string("unparseable ") + what};
    }
    return value;
}

std::optional<int> optional_int(const std::string& text, const char* what) {
    if (text.empty()) return std::nullopt;
    int value = 0;
    const auto r = std::from_chars(text.data(), text.data() + text.size(), value);
    if (r.ec != std::errc{} || r.ptr != text.data() + text.size()) {
        throw RowError{std::string("unparseable ") + what};
    }
    return value;
}

bool parse_bool(const std::string& text, const char* what) {
    std::string t = text;
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
    if (t.empty() || t == "0" || t == "false" || t == "no" || t == "n") return false;
    if (t == "1" || t == "true" || t == "yes" || t == "y") return true;
    throw RowError{std::string("unparseable flag ") + what};
}

bool is_blank(const std::vector<std::string>& row) {
    return std::all_of(row.begin(), row.end(), [](const std::string& f) { return csv::trim(f).empty(); });
}

}  // namespace

ParsedSales parse_sales_csv(std::istream& in, const SalesSchema& schema, const FilterConfig* window) {
    if (!in) throw IoError("sales stream is not readable");
    csv::Reader reader(in);
    std::vector<std::string> row;
    if (!reader.next(row)) throw SchemaError("sales file has no header row");
    if (in.bad()) throw IoError("error reading sales stream");
    if (!row.empty() && row[0].starts_with("\xEF\xBB\xBF")) row[0].erase(0, 3);

    const HeaderIndex header(row);
    const std::size_t c_sale = header.require(schema.sale_id);
    const std::size_t c_artist = header.require(schema.artist_id);
    const std::size_t c_year = header.require(schema.sale_year);
    const std::size_t c_month = header.require(schema.sale_month);
    const std::size_t c_hammer = header.require(schema.hammer_price);
    const std::size_t c_premium = header.require(schema.premium_price);
    const std::size_t c_height = header.require(schema.height);
    const std::size_t c_width = header.require(schema.width);
    const auto c_painting = header.find(schema.painting_id);
    const auto c_title = header.find(schema.title);
    const auto c_exec = header.find(schema.execution_year);
    const auto c_canvas = header.find(schema.is_canvas);
    const auto c_house = header.find(schema.auction_house);
    const auto c_currency = header.find(schema.currency);
    const std::optional<std::size_t> c_subject[] = {
        header.find(schema.still_life), header.find(schema.landscape_subject),
        header.find(schema.people), header.find(schema.nude), header.find(schema.flowers)};

    ParsedSales out;
    std::size_t data_row = 0;
    while (reader.next(row)) {
        ++data_row;
        if (is_blank(row)) continue;
        try {
            SaleRecord r;
            r.sale_id = field_at(row, c_sale);
            r.artist_id = field_at(row, c_artist);
            if (r.sale_id.empty()) throw RowError{"missing sale_id"};
            if (r.artist_id.empty()) throw RowError{"missing artist_id"};

            const std::string currency = field_at(row, c_currency);
            if (!currency.empty() && currency != "USD" && currency != "usd") {
                throw RowError{"non-USD currency"};
            }

            const auto year = optional_int(field_at(row, c_year), "sale_year");
            const auto month = optional_int(field_at(row, c_month), "sale_month");
            if (!year || !month || *month < 1 || *month > 12) throw RowError{"unparseable sale date"};
            r.sale_date = {*year, *month};
            if (window && !window->in_window(r.sale_date)) throw RowError{"sale date outside window"};

            const auto height = optional_number(field_at(row, c_height), "height");
            const auto width = optional_number(field_at(row, c_width), "width");
            if (!height || !width) throw RowError{"missing dimension"};
            if (!(*height > 0.0) || !(*width > 0.0)) throw RowError{"nonpositive dimension"};
            r.height_cm = *height;
            r.width_cm = *width;

            r.hammer_price = optional_number(field_at(row, c_hammer), "hammer price");
            r.premium_price = optional_number(field_at(row, c_premium), "premium price");
            if (r.hammer_price && !(*r.hammer_price > 0.0)) r.hammer_price.reset();
            if (r.premium_price && !(*r.premium_price > 0.0)) r.premium_price.reset();
            if (!r.hammer_price && !r.premium_price) throw RowError{"no price"};

            const std::string painting = field_at(row, c_painting);
            if (!painting.empty()) r.painting_id = painting;
            r.title = field_at(row, c_title);
            r.execution_year = optional_int(field_at(row, c_exec), "execution_year");
            r.is_canvas = parse_bool(field_at(row, c_canvas), "is_canvas");
            for (std::size_t i = 0; i < std::size(kAllSubjects); ++i) {
                r.subjects.set(kAllSubjects[i], parse_bool(field_at(row, c_subject[i]),
                                                           subject_name(kAllSubjects[i])));
            }
            r.auction_house = field_at(row, c_house);
            out.records.push_back(std::move(r));
        } catch (const RowError& e) {
            out.diagnostics.push_back({data_row, e.reason});
        }
    }
    if (in.bad()) throw IoError("error reading sales stream");
    return out;
}

CpiTable parse_cpi_csv(std::istream& in, YearMonth base_month) {
    if (!in) throw IoError("CPI stream is not readable");
    csv::Reader reader(in);
    std::vector<std::string> row;
    if (!reader.next(row)) throw SchemaError("CPI file has no header row");
    const HeaderIndex header(row);
    const std::size_t c_year = header.require("year");
    const std::size_t c_month = header.require("month");
    const std::size_t c_level = header.require("cpi_level");

    std::map<YearMonth, double> levels;
    std::size_t data_row = 0;
    while (reader.next(row)) {
        ++data_row;
        if (is_blank(row)) continue;
        try {
            const auto year = optional_int(field_at(row, c_year), "year");
            const auto month = optional_int(field_at(row, c_month), "month");
            const auto level = optional_number(field_at(row, c_level), "cpi_level");
            if (!year || !month || !level || *month < 1 || *month > 12) throw RowError{"incomplete"};
            levels[{*year, *month}] = *level;
        } catch (const RowError& e) {
            throw SchemaError("CPI row " + std::to_string(data_row) + ": " + e.reason);
        }
    }
    return CpiTable(base_month, std::move(levels));
}

std::vector<ArtistRecord> parse_artists_csv(std::istream& in) {
    if (!in) throw IoError("artists stream is not readable");
    csv::Reader reader(in);
    std::vector<std::string> row;
    if (!reader.next(row)) throw SchemaError("artists file has no header row");
    const HeaderIndex header(row);
    const std::size_t c_id = header.require("artist_id");
    const std::size_t c_birth = header.require("birth_year");
    const auto c_name = header.find("name");
    const auto c_death = header.find("death_year");

    std::vector<ArtistRecord> out;
    std::size_t data_row = 0;
    while (reader.next(row)) {
        ++data_row;
        if (is_blank(row)) continue;
        try {
            ArtistRecord a;
            a.artist_id = field_at(row, c_id);
            a.name = field_at(row, c_name);
            const auto birth = optional_int(field_at(row, c_birth), "birth_year");
            if (a.artist_id.empty() || !birth) throw RowError{"missing artist_id or birth_year"};
            a.birth_year = *birth;
            a.death_year = optional_int(field_at(row, c_death), "death_year");
            if (a.death_year && *a.death_year < a.birth_year) throw RowError{"death before birth"};
            out.push_back(std::move(a));
        } catch (const RowError& e) {
            throw SchemaError("artists row " + std::to_string(data_row) + ": " + e.reason);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

AdjustedSale to_real_premium(const SaleRecord& record, const CpiTable& cpi,
                             const PremiumSchedule& schedule) {
    double nominal = 0.0;
    if (record.premium_price && *record.premium_price > 0.0) {
        nominal = *record.premium_price;
    } else if (record.hammer_price && *record.hammer_price > 0.0) {
        nominal = schedule.premium_price(*record.hammer_price);
    } else {
        throw DomainError("sale " + record.sale_id + " has no positive price");
    }

    AdjustedSale out;
    out.sale = record;
    out.real_premium_price = nominal * cpi.deflator(record.sale_date);
    out.area_cm2 = record.height_cm * record.width_cm;
    out.apv = apv(out.real_premium_price, record.height_cm, record.width_cm);
    return out;
}

FilterResult apply_filters(const std::vector<AdjustedSale>& sales, const FilterConfig& cfg) {
    FilterResult out;
    for (const AdjustedSale& s : sales) {
        if (s.real_premium_price < cfg.min_price) {
            out.dropped.push_back({s, "price below minimum"});
        } else if (s.apv < cfg.min_apv) {
            out.dropped.push_back({s, "APV below minimum"});
        } else if (!cfg.in_window(s.sale.sale_date)) {
            out.dropped.push_back({s, "outside date window"});
        } else {
            out.kept.push_back(s);
        }
    }
    return out;
}

}  // namespace apv
