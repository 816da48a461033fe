#pragma once

// Synthetic data for unit and acceptance tests. Every generator takes its
// randomness from the caller's engine so suites stay reproducible.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "apv/hedonic.hpp"
#include "apv/ingest.hpp"
#include "apv/least_squares.hpp"

namespace apv::testing {

using Rng = std::mt19937_64;

struct SaleSpec {
    double price = 100000.0;  ///< real premium price
    double height = 50.0;
    double width = 40.0;
    int year = 2000;
    int month = 6;
    std::string artist = "artist";
    std::optional<int> execution_year;
    std::optional<std::string> painting_id;
    std::string title;
    bool canvas = true;
    SubjectFlags subjects;
    std::string sale_id;
};

[[nodiscard]] AdjustedSale make_sale(const SaleSpec& spec);

/// Sale whose APV is exactly `apv_value` on a 10 x 10 canvas.
[[nodiscard]] AdjustedSale sale_with_apv(double apv_value, int year = 2000, int month = 6,
                                         const std::string& artist = "artist");

[[nodiscard]] std::vector<double> lognormal_sample(Rng& rng, std::size_t n, double mu, double sigma);

struct LinearSample {
    linalg::Matrix x;
    std::vector<double> y;
    std::vector<std::string> labels;
    std::vector<double> beta;
};

/// Hedonic-style regression with known coefficients: intercept, age, age^2,
/// log area, canvas dummy and three sale-year dummies.
[[nodiscard]] LinearSample hedonic_sample(Rng& rng, std::size_t n, double noise_sd);

/// y = 1 + 0.5 x1 - 0.3 x2 + e with x1 ~ U(1, 5), x2 ~ N(0, 1). The noise sd
/// is 1, or proportional to x1 when heteroscedastic.
[[nodiscard]] LinearSample white_sample(Rng& rng, std::size_t n, bool heteroscedastic);

struct RepeatMarketOptions {
    int years = 25;
    int new_paintings_per_year = 60;
    double trend = 0.03;          ///< log drift of the common market factor
    double market_sd = 0.08;      ///< yearly common shock
    double idiosyncratic_sd = 0.20;
    double resale_intercept = -3.0;
    double resale_slope = 5.0;    ///< on log appreciation since the last sale
};

/// Each painting sells once when it enters, then resells with a probability
/// that rises with its appreciation since its previous sale.
[[nodiscard]] std::vector<AdjustedSale> repeat_sales_market(Rng& rng, const RepeatMarketOptions& options);

struct HedonicMarket {
    std::vector<AdjustedSale> sales;
    std::vector<ArtistRecord> artists;
    std::vector<double> year_effects;  ///< delta by year offset
};

struct HedonicMarketOptions {
    int first_year = 1985;
    int years = 25;
    int sales_per_year = 150;
    double year_effect_sd = 0.25;
    double noise_sd = 0.4;
    bool constant_characteristics = false;  ///< same painting mix every year
};

/// Log price depends on area, aspect ratio, age at execution, canvas and a
/// year effect. Characteristics drift from year to year unless held constant.
[[nodiscard]] HedonicMarket hedonic_market(Rng& rng, const HedonicMarketOptions& options);

/// Design that matches the generator of hedonic_market.
[[nodiscard]] DesignSpec hedonic_market_design();

}  // namespace apv::testing
