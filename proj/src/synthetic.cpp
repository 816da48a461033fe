#include "apv/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <random>

#include "apv/csv.hpp"
#include "apv/error.hpp"

namespace apv::synthetic {

namespace {

class Draws {
public:
    explicit Draws(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double normal() {
        if (spare_) {
            spare_ = false;
            return cached_;
        }
        double u = uniform();
        while (u <= 0.0) u = uniform();
        const double v = uniform();
        const double r = std::sqrt(-2.0 * std::log(u));
        cached_ = r * std::sin(2.0 * std::numbers::pi * v);
        spare_ = true;
        return r * std::cos(2.0 * std::numbers::pi * v);
    }

    int integer(int lo, int hi) {
        return lo + static_cast<int>(uniform() * static_cast<double>(hi - lo + 1));
    }

    int poisson(double mean) {
        // inversion; means here are small
        const double limit = std::exp(-mean);
        int k = 0;
        double p = uniform();
        while (p > limit) {
            ++k;
            p *= uniform();
        }
        return k;
    }

private:
    std::mt19937_64 engine_;
    bool spare_ = false;
    double cached_ = 0.0;
};

struct ArtistProfile {
    ArtistRecord record;
    double log_level;  ///< log APV around the base month
    double trend;      ///< yearly log drift
    int peak_age;
};

const ArtistProfile kProfiles[] = {
    {{"matisse", "Henri Matisse", 1869, 1954}, 6.2, 0.045, 40},
    {{"monet", "Claude Monet", 1840, 1926}, 6.0, 0.055, 45},
    {{"renoir", "Pierre-Auguste Renoir", 1841, 1919}, 5.9, 0.030, 35},
    {{"cezanne", "Paul Cezanne", 1839, 1906}, 5.8, 0.050, 50},
    {{"degas", "Edgar Degas", 1834, 1917}, 5.7, 0.040, 45},
    {{"pissarro", "Camille Pissarro", 1830, 1903}, 5.3, 0.035, 50},
    {{"signac", "Paul Signac", 1863, 1935}, 5.0, 0.040, 35},
    {{"sisley", "Alfred Sisley", 1839, 1899}, 4.8, 0.025, 40},
};

struct Painting {
    std::string id;
    std::string artist_id;
    std::string title;
    double height;
    double width;
    std::optional<int> execution_year;
    bool canvas;
    SubjectFlags subjects;
    double log_quality;
};

const char* const kTitleWords[] = {"Jardin", "Seine", "Femme", "Bouquet", "Village", "Nature morte", "Port",
                                   "Baigneuses", "Route", "Matin", "Soir", "Portrait", "Pont", "Champ"};

double round_to(double v, double step) { return std::round(v / step) * step; }

}  // namespace

Dataset generate(const Options& o) {
    if (o.last_year <= o.first_year) throw DomainError("synthetic data needs at least two years");
    Draws d(o.seed);
    Dataset out;

    // monthly CPI with a steady drift and small noise, base month at the end
    double level = 100.0;
    for (int y = o.first_year; y <= o.last_year; ++y) {
        for (int m = 1; m <= 12; ++m) {
            out.cpi[{y, m}] = round_to(level, 0.001);
            level *= 1.0 + 0.0025 + 0.0015 * d.normal();
        }
    }
    out.base_month = {o.last_year, 12};
    const double base_cpi = out.cpi.at(out.base_month);

    std::vector<double> year_effect;
    double market = 0.0;
    for (int y = o.first_year; y <= o.last_year; ++y) {
        year_effect.push_back(market);
        market += 0.03 + 0.12 * d.normal();
    }

    std::vector<Painting> paintings;
    std::size_t sale_counter = 0;
    for (const ArtistProfile& a : kProfiles) {
        out.artists.push_back(a.record);
        const int career_start = a.record.birth_year + 18;
        const int career_end = a.record.death_year.value_or(a.record.birth_year + 80);
        std::vector<std::size_t> own;
        for (int y = o.first_year; y <= o.last_year; ++y) {
            const int n = d.poisson(o.sales_per_artist_year);
            for (int k = 0; k < n; ++k) {
                std::size_t pi = 0;
                if (!own.empty() && d.uniform() < o.resale_share) {
                    pi = own[static_cast<std::size_t>(d.integer(0, static_cast<int>(own.size()) - 1))];
                } else {
                    Painting p;
                    p.id = a.record.artist_id + "-" + std::to_string(own.size() + 1);
                    p.artist_id = a.record.artist_id;
                    p.title = std::string(kTitleWords[d.integer(0, 13)]) + " " + std::to_string(own.size() + 1);
                    const double log_area = std::log(2800.0) + 0.7 * d.normal();
                    const double log_aspect = 0.25 * d.normal();
                    p.height = std::max(8.0, round_to(std::exp(0.5 * (log_area + log_aspect)), 0.5));
                    p.width = std::max(8.0, round_to(std::exp(0.5 * (log_area - log_aspect)), 0.5));
                    if (d.uniform() < 0.93) p.execution_year = d.integer(career_start, career_end);
                    p.canvas = d.uniform() < 0.85;
                    p.subjects.still_life = d.uniform() < 0.15;
                    p.subjects.landscape_subject = d.uniform() < 0.40;
                    p.subjects.people = d.uniform() < 0.35;
                    p.subjects.nude = d.uniform() < 0.08;
                    p.subjects.flowers = d.uniform() < 0.12;
                    p.log_quality = 0.6 * d.normal();
                    paintings.push_back(p);
                    pi = paintings.size() - 1;
                    own.push_back(pi);
                }
                const Painting& p = paintings[pi];
                const int month = d.integer(1, 12);
                const double area = p.height * p.width;
                const double age = p.execution_year ? *p.execution_year - a.record.birth_year : a.peak_age;
                double log_apv = a.log_level + a.trend * (y - o.first_year) + year_effect[static_cast<std::size_t>(
                                                                                   y - o.first_year)] +
                                 p.log_quality - 0.25 * (std::log(area) - std::log(2800.0)) -
                                 0.0008 * (age - a.peak_age) * (age - a.peak_age) + 0.35 * d.normal();
                if (p.canvas) log_apv += 0.15;
                if (p.subjects.nude) log_apv += 0.20;
                if (p.subjects.still_life) log_apv -= 0.10;
                const double real_premium = std::exp(log_apv) * area;
                const double nominal_premium = real_premium * out.cpi.at({y, month}) / base_cpi;

                SaleRecord s;
                s.sale_id = "S" + std::to_string(++sale_counter);
                s.artist_id = p.artist_id;
                s.painting_id = p.id;
                s.title = p.title;
                s.sale_date = {y, month};
                s.execution_year = p.execution_year;
                s.height_cm = p.height;
                s.width_cm = p.width;
                s.is_canvas = p.canvas;
                s.subjects = p.subjects;
                s.auction_house = d.uniform() < 0.5 ? "Christie's" : "Sotheby's";
                if (d.uniform() < 0.7) {
                    s.premium_price = round_to(nominal_premium, 1.0);
                    s.hammer_price = round_to(nominal_premium / 1.2, 1.0);
                } else {
                    s.hammer_price = round_to(nominal_premium / 1.2, 1.0);
                }
                out.sales.push_back(std::move(s));
            }
        }
    }
    return out;
}

namespace {

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

}  // namespace

void write_sales_csv(std::ostream& out, const std::vector<SaleRecord>& sales) {
    out << "sale_id,artist_id,painting_id,title,sale_year,sale_month,execution_year,hammer_price_usd,"
           "premium_price_usd,height_cm,width_cm,is_canvas,still_life,landscape_subject,people,nude,flowers,"
           "auction_house,currency\n";
    const auto flag = [](bool b) { return b ? "1" : "0"; };
    for (const SaleRecord& s : sales) {
        out << csv::escape(s.sale_id) << ',' << csv::escape(s.artist_id) << ','
            << csv::escape(s.painting_id.value_or("")) << ',' << csv::escape(s.title) << ',' << s.sale_date.year
            << ',' << s.sale_date.month << ',' << (s.execution_year ? std::to_string(*s.execution_year) : "")
            << ',' << (s.hammer_price ? fixed(*s.hammer_price, 0) : "") << ','
            << (s.premium_price ? fixed(*s.premium_price, 0) : "") << ',' << fixed(s.height_cm, 1) << ','
            << fixed(s.width_cm, 1) << ',' << flag(s.is_canvas) << ',' << flag(s.subjects.still_life) << ','
            << flag(s.subjects.landscape_subject) << ',' << flag(s.subjects.people) << ','
            << flag(s.subjects.nude) << ',' << flag(s.subjects.flowers) << ',' << csv::escape(s.auction_house)
            << ",USD\n";
    }
}

void write_cpi_csv(std::ostream& out, const std::map<YearMonth, double>& cpi) {
    out << "year,month,cpi_level\n";
    for (const auto& [m, v] : cpi) out << m.year << ',' << m.month << ',' << fixed(v, 3) << '\n';
}

void write_artists_csv(std::ostream& out, const std::vector<ArtistRecord>& artists) {
    out << "artist_id,name,birth_year,death_year\n";
    for (const ArtistRecord& a : artists) {
        out << csv::escape(a.artist_id) << ',' << csv::escape(a.name) << ',' << a.birth_year << ','
            << (a.death_year ? std::to_string(*a.death_year) : "") << '\n';
    }
}

std::vector<std::filesystem::path> write_dataset(const Dataset& data, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw IoError("cannot create directory '" + dir.string() + "'");
    }
    std::vector<std::filesystem::path> written;
    const auto open = [&](const char* name) {
        written.push_back(dir / name);
        std::ofstream f(written.back(), std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot write '" + written.back().string() + "'");
        return f;
    };
    {
        auto f = open("sales.csv");
        write_sales_csv(f, data.sales);
    }
    {
        auto f = open("cpi.csv");
        write_cpi_csv(f, data.cpi);
    }
    {
        auto f = open("artists.csv");
        write_artists_csv(f, data.artists);
    }
    {
        auto f = open("apv.conf");
        f << "sales = sales.csv\n"
             "cpi = cpi.csv\n"
             "artists = artists.csv\n"
             "base_month = "
          << data.base_month.to_string()
          << "\n"
             "premium_schedule = 0.2\n"
             "min_price = 10000\n"
             "min_apv = 1\n"
             "index_window_months = 12\n"
             "index_min_price = 50000\n"
             "seed = 1\n";
    }
    for (const auto& p : written) {
        if (!std::filesystem::exists(p)) throw IoError("write failed for '" + p.string() + "'");
    }
    return written;
}

}  // namespace apv::synthetic
