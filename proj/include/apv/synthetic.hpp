#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "apv/ingest.hpp"

namespace apv::synthetic {

struct Options {
    std::uint64_t seed = 1;
    int first_year = 1985;
    int last_year = 2012;
    double sales_per_artist_year = 18.0;
    double resale_share = 0.15;
};

struct Dataset {
    std::vector<SaleRecord> sales;
    std::vector<ArtistRecord> artists;
    std::map<YearMonth, double> cpi;
    YearMonth base_month;
};

/// Multi-artist auction history with resales, execution years, subject flags
/// and a monthly CPI. Draws come from the seed through platform-independent
/// transforms, so the same seed gives the same files everywhere.
[[nodiscard]] Dataset generate(const Options& options);

void write_sales_csv(std::ostream& out, const std::vector<SaleRecord>& sales);
void write_cpi_csv(std::ostream& out, const std::map<YearMonth, double>& cpi);
void write_artists_csv(std::ostream& out, const std::vector<ArtistRecord>& artists);

/// Writes sales.csv, cpi.csv, artists.csv and apv.conf into `dir`.
std::vector<std::filesystem::path> write_dataset(const Dataset& data, const std::filesystem::path& dir);

}  // namespace apv::synthetic
