#pragma once

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace apv {

struct YearMonth {
    int year = 0;
    int month = 1;  // 1..12

    auto operator<=>(const YearMonth&) const = default;

    /// Months since year 0, so consecutive months differ by one.
    [[nodiscard]] int ordinal() const { return year * 12 + (month - 1); }
    [[nodiscard]] static YearMonth from_ordinal(int ordinal);
    [[nodiscard]] std::string to_string() const;  // "YYYY-MM"
    /// Parses "YYYY-MM"; throws DomainError.
    [[nodiscard]] static YearMonth parse(const std::string& text);
};

enum class Subject { still_life, landscape_subject, people, nude, flowers };

inline constexpr Subject kAllSubjects[] = {Subject::still_life, Subject::landscape_subject,
                                           Subject::people, Subject::nude, Subject::flowers};

[[nodiscard]] const char* subject_name(Subject s);
[[nodiscard]] std::optional<Subject> subject_from_name(const std::string& name);

struct SubjectFlags {
    bool still_life = false;
    bool landscape_subject = false;
    bool people = false;
    bool nude = false;
    bool flowers = false;

    [[nodiscard]] bool get(Subject s) const;
    void set(Subject s, bool value);
};

/// One auction sale as recorded, in nominal USD.
struct SaleRecord {
    std::string sale_id;
    std::string artist_id;
    std::optional<std::string> painting_id;
    std::string title;
    YearMonth sale_date;
    std::optional<int> execution_year;
    std::optional<double> hammer_price;
    std::optional<double> premium_price;
    double height_cm = 0.0;
    double width_cm = 0.0;
    bool is_canvas = false;
    SubjectFlags subjects;
    std::string auction_house;
};

struct ArtistRecord {
    std::string artist_id;
    std::string name;
    int birth_year = 0;
    std::optional<int> death_year;
};

/// Monthly price-level index with a base month for real-dollar conversion.
class CpiTable {
public:
    /// Throws DomainError on a nonpositive level or a missing base month.
    CpiTable(YearMonth base_month, std::map<YearMonth, double> levels);

    [[nodiscard]] YearMonth base_month() const { return base_; }
    [[nodiscard]] const std::map<YearMonth, double>& levels() const { return levels_; }
    [[nodiscard]] bool covers(YearMonth m) const { return levels_.contains(m); }

    /// cpi[base] / cpi[m]; throws CoverageError naming the month.
    [[nodiscard]] double deflator(YearMonth m) const;

    /// Throws CoverageError for the first month in [first, last] lacking a level.
    void require_contiguous(YearMonth first, YearMonth last) const;

private:
    YearMonth base_;
    std::map<YearMonth, double> levels_;
};

/// Buyer's-premium tiers: rate applies to hammer prices up to (and including)
/// the tier's upper bound. The last bound is +infinity.
class PremiumSchedule {
public:
    struct Tier {
        double upper_bound;
        double rate;
    };

    /// Throws DomainError unless bounds strictly increase, end at +inf, and
    /// every rate lies in [0, 1).
    explicit PremiumSchedule(std::vector<Tier> tiers);

    /// Single-tier schedule; the default is a flat 20% premium.
    [[nodiscard]] static PremiumSchedule flat(double rate = 0.20);

    /// Parses "bound:rate, bound:rate, inf:rate" or a single rate "0.2".
    [[nodiscard]] static PremiumSchedule parse(const std::string& text);

    [[nodiscard]] double rate(double hammer) const;
    [[nodiscard]] double premium_price(double hammer) const { return hammer * (1.0 + rate(hammer)); }
    [[nodiscard]] const std::vector<Tier>& tiers() const { return tiers_; }
    [[nodiscard]] std::string to_string() const;

private:
    std::vector<Tier> tiers_;
};

/// A sale converted to base-month dollars with its APV.
struct AdjustedSale {
    SaleRecord sale;
    double real_premium_price = 0.0;
    double area_cm2 = 0.0;
    double apv = 0.0;
};

struct FilterConfig {
    double min_price = 10000.0;
    double min_apv = 1.0;
    std::optional<YearMonth> window_start;
    std::optional<YearMonth> window_end;

    [[nodiscard]] bool in_window(YearMonth m) const;
    void validate() const;
};

struct RowDiagnostic {
    std::size_t row = 0;  ///< 1-based data row, header excluded
    std::string reason;
};

/// Header names for each logical field of the sales file.
struct SalesSchema {
    std::string sale_id = "sale_id";
    std::string artist_id = "artist_id";
    std::string painting_id = "painting_id";
    std::string title = "title";
    std::string sale_year = "sale_year";
    std::string sale_month = "sale_month";
    std::string execution_year = "execution_year";
    std::string hammer_price = "hammer_price_usd";
    std::string premium_price = "premium_price_usd";
    std::string height = "height_cm";
    std::string width = "width_cm";
    std::string is_canvas = "is_canvas";
    std::string still_life = "still_life";
    std::string landscape_subject = "landscape_subject";
    std::string people = "people";
    std::string nude = "nude";
    std::string flowers = "flowers";
    std::string auction_house = "auction_house";
    std::string currency = "currency";  ///< optional; rows other than USD are rejected
};

struct ParsedSales {
    std::vector<SaleRecord> records;
    std::vector<RowDiagnostic> diagnostics;
};

/// Reads a sales CSV. Malformed rows become diagnostics; a missing mandatory
/// header column throws SchemaError and an unreadable stream throws IoError.
/// Rows dated outside `window` (when given) are rejected with a diagnostic.
[[nodiscard]] ParsedSales parse_sales_csv(std::istream& in, const SalesSchema& schema = {},
                                          const FilterConfig* window = nullptr);

/// Reads "year,month,cpi_level" rows.
[[nodiscard]] CpiTable parse_cpi_csv(std::istream& in, YearMonth base_month);

/// Reads "artist_id,name,birth_year,death_year" rows.
[[nodiscard]] std::vector<ArtistRecord> parse_artists_csv(std::istream& in);

/// Chooses the recorded premium price when present, else applies the
/// schedule to the hammer price, then deflates to base-month dollars.
[[nodiscard]] AdjustedSale to_real_premium(const SaleRecord& record, const CpiTable& cpi,
                                           const PremiumSchedule& schedule);

struct DroppedSale {
    AdjustedSale sale;
    std::string reason;
};

struct FilterResult {
    std::vector<AdjustedSale> kept;
    std::vector<DroppedSale> dropped;
};

/// Keeps sales with real price >= min_price, apv >= min_apv and a sale month
/// inside the window. Dropped sales carry the first rule they violate.
[[nodiscard]] FilterResult apply_filters(const std::vector<AdjustedSale>& sales,
                                         const FilterConfig& cfg);

}  // namespace apv
