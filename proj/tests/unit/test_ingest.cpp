#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "apv/error.hpp"
#include "apv/ingest.hpp"
#include "doctest.h"
#include "generators.hpp"

using namespace apv;

namespace {

const char* kHeader =
    "sale_id,artist_id,painting_id,title,sale_year,sale_month,execution_year,hammer_price_usd,"
    "premium_price_usd,height_cm,width_cm,is_canvas,still_life,landscape_subject,people,nude,flowers,"
    "auction_house\n";

ParsedSales parse(const std::string& rows) {
    std::istringstream in(std::string(kHeader) + rows);
    return parse_sales_csv(in);
}

CpiTable flat_cpi(YearMonth base, int first_year, int last_year, double level = 100.0) {
    std::map<YearMonth, double> levels;
    for (int y = first_year; y <= last_year; ++y) {
        for (int m = 1; m <= 12; ++m) levels[{y, m}] = level;
    }
    return CpiTable(base, levels);
}

}  // namespace

TEST_CASE("well-formed row maps fields directly") {
    const auto r = parse("s1,renoir,p1,\"Femme, assise\",1990,5,1876,,120000,50,40,1,0,0,1,0,0,Christie's\n");
    REQUIRE(r.records.size() == 1);
    CHECK(r.diagnostics.empty());
    const SaleRecord& s = r.records[0];
    CHECK(s.sale_id == "s1");
    CHECK(s.artist_id == "renoir");
    CHECK(*s.painting_id == "p1");
    CHECK(s.title == "Femme, assise");
    CHECK(s.sale_date == YearMonth{1990, 5});
    CHECK(*s.execution_year == 1876);
    CHECK_FALSE(s.hammer_price);
    CHECK(*s.premium_price == 120000.0);
    CHECK(s.height_cm == 50.0);
    CHECK(s.width_cm == 40.0);
    CHECK(s.is_canvas);
    CHECK(s.subjects.people);
    CHECK_FALSE(s.subjects.still_life);
    CHECK(s.auction_house == "Christie's");
}

TEST_CASE("malformed rows become diagnostics and parsing continues") {
    const auto r = parse(
        "s1,a,,t,1990,5,,,120000,0,40,1,0,0,0,0,0,x\n"
        "s2,a,,t,1990,5,,,,50,40,1,0,0,0,0,0,x\n"
        "s3,a,,t,1990,13,,,1000,50,40,1,0,0,0,0,0,x\n"
        "s4,a,,t,1990,5,,,abc,50,40,1,0,0,0,0,0,x\n"
        "s5,a,,t,1990,5,,90000,,50,40,1,0,0,0,0,0,x\n");
    REQUIRE(r.records.size() == 1);
    CHECK(r.records[0].sale_id == "s5");
    REQUIRE(r.diagnostics.size() == 4);
    CHECK(r.diagnostics[0].row == 1);
    CHECK(r.diagnostics[0].reason == "nonpositive dimension");
    CHECK(r.diagnostics[1].reason == "no price");
    CHECK(r.diagnostics[2].reason == "unparseable sale date");
    CHECK(r.diagnostics[3].row == 4);
}

TEST_CASE("missing mandatory column is a schema error") {
    std::istringstream in("sale_id,artist_id,sale_year,sale_month,height_cm,width_cm,premium_price_usd\n");
    CHECK_THROWS_AS((void)parse_sales_csv(in), SchemaError);
}

TEST_CASE("non-USD rows are rejected when a currency column exists") {
    std::istringstream in(
        "sale_id,artist_id,sale_year,sale_month,hammer_price_usd,premium_price_usd,height_cm,width_cm,currency\n"
        "a,x,2000,1,,50000,10,10,EUR\n"
        "b,x,2000,1,,50000,10,10,USD\n");
    const auto r = parse_sales_csv(in);
    CHECK(r.records.size() == 1);
    REQUIRE(r.diagnostics.size() == 1);
    CHECK(r.diagnostics[0].reason == "non-USD currency");
}

TEST_CASE("rows outside the analysis window are reported") {
    FilterConfig cfg;
    cfg.window_start = YearMonth{1985, 1};
    std::istringstream in(std::string(kHeader) + "s1,a,,t,1960,5,,,120000,50,40,1,0,0,0,0,0,x\n");
    const auto r = parse_sales_csv(in, {}, &cfg);
    CHECK(r.records.empty());
    CHECK(r.diagnostics.at(0).reason == "sale date outside window");
}

TEST_CASE("deflation uses base over sale-month CPI") {
    SaleRecord rec;
    rec.sale_id = "x";
    rec.sale_date = {2000, 3};
    rec.premium_price = 100.0;
    rec.height_cm = 1;
    rec.width_cm = 1;
    std::map<YearMonth, double> levels{{{2000, 3}, 100.0}, {{2010, 1}, 200.0}};
    const CpiTable cpi({2010, 1}, levels);
    const auto adj = to_real_premium(rec, cpi, PremiumSchedule::flat());
    CHECK(adj.real_premium_price == 200.0);

    rec.sale_date = {1999, 1};
    CHECK_THROWS_AS((void)to_real_premium(rec, cpi, PremiumSchedule::flat()), CoverageError);
    try {
        (void)to_real_premium(rec, cpi, PremiumSchedule::flat());
    } catch (const CoverageError& e) {
        CHECK(e.year() == 1999);
        CHECK(e.month() == 1);
    }
}

TEST_CASE("premium schedule and precedence") {
    const CpiTable cpi = flat_cpi({2010, 1}, 2000, 2010);
    SaleRecord rec;
    rec.sale_id = "x";
    rec.sale_date = {2005, 6};
    rec.hammer_price = 100000.0;
    rec.height_cm = 50;
    rec.width_cm = 40;
    auto adj = to_real_premium(rec, cpi, PremiumSchedule::flat(0.20));
    CHECK(adj.real_premium_price == doctest::Approx(120000.0).epsilon(1e-15));

    rec.premium_price = 120000.0;
    rec.hammer_price = 1.0;
    adj = to_real_premium(rec, cpi, PremiumSchedule::flat(0.5));
    CHECK(adj.real_premium_price == 120000.0);
    CHECK(adj.area_cm2 == 2000.0);
    CHECK(adj.apv == 60.0);

    const auto tiers = PremiumSchedule::parse("100000:0.25, 1000000:0.2, inf:0.12");
    CHECK(tiers.rate(100000) == 0.25);
    CHECK(tiers.rate(100001) == 0.2);
    CHECK(tiers.rate(5e6) == 0.12);
    CHECK_THROWS_AS((void)PremiumSchedule::parse("100:0.1,50:0.2,inf:0.1"), DomainError);
    CHECK_THROWS_AS((void)PremiumSchedule::parse("100:0.1"), DomainError);
    CHECK_THROWS_AS((void)PremiumSchedule::flat(1.0), DomainError);
}

TEST_CASE("filters apply inclusive real-price and APV floors") {
    using testing::make_sale;
    using testing::SaleSpec;
    auto sale = [](double price, double apv_value) {
        SaleSpec s;
        s.price = price;
        s.height = 1.0;
        s.width = price / apv_value;
        return make_sale(s);
    };
    const std::vector<AdjustedSale> sales{sale(9999, 5), sale(50000, 0.5), sale(10000, 1.0)};
    const auto r = apply_filters(sales, FilterConfig{});
    REQUIRE(r.kept.size() == 1);
    CHECK(r.kept[0].real_premium_price == 10000.0);
    REQUIRE(r.dropped.size() == 2);
    CHECK(r.dropped[0].reason == "price below minimum");
    CHECK(r.dropped[1].reason == "APV below minimum");
    CHECK(apply_filters({}, FilterConfig{}).kept.empty());
}

TEST_CASE("filter output partitions the input") {
    testing::Rng rng(3);
    std::lognormal_distribution<double> price(std::log(20000.0), 1.0);
    std::uniform_real_distribution<double> side(5.0, 200.0);
    std::uniform_int_distribution<int> year(1980, 2015);
    std::vector<AdjustedSale> sales;
    for (int i = 0; i < 500; ++i) {
        testing::SaleSpec s;
        s.price = price(rng);
        s.height = side(rng);
        s.width = side(rng);
        s.year = year(rng);
        sales.push_back(testing::make_sale(s));
    }
    FilterConfig cfg;
    cfg.window_start = YearMonth{1985, 1};
    cfg.window_end = YearMonth{2012, 12};
    const auto r = apply_filters(sales, cfg);
    CHECK(r.kept.size() + r.dropped.size() == sales.size());
    std::multiset<std::string> ids;
    for (const auto& s : r.kept) ids.insert(s.sale.sale_id);
    for (const auto& d : r.dropped) ids.insert(d.sale.sale.sale_id);
    std::multiset<std::string> expected;
    for (const auto& s : sales) expected.insert(s.sale.sale_id);
    CHECK(ids == expected);
    for (const auto& s : r.kept) {
        CHECK(s.real_premium_price >= 10000.0);
        CHECK(s.apv >= 1.0);
        CHECK(cfg.in_window(s.sale.sale_date));
    }
}

TEST_CASE("unit deflator is the identity and APV round-trips bit for bit") {
    const CpiTable cpi = flat_cpi({2010, 1}, 1980, 2015, 137.3);
    testing::Rng rng(5);
    std::uniform_real_distribution<double> price(1e3, 1e7), side(1.0, 300.0);
    for (int i = 0; i < 200; ++i) {
        SaleRecord rec;
        rec.sale_id = std::to_string(i);
        rec.sale_date = {1990, 1 + i % 12};
        rec.premium_price = price(rng);
        rec.height_cm = side(rng);
        rec.width_cm = side(rng);
        const auto adj = to_real_premium(rec, cpi, PremiumSchedule::flat());
        CHECK(adj.real_premium_price == *rec.premium_price);
        CHECK(adj.area_cm2 == rec.height_cm * rec.width_cm);
        CHECK(adj.real_premium_price / adj.area_cm2 == adj.apv);
        CHECK(std::abs(adj.apv * adj.area_cm2 - adj.real_premium_price) <=
              adj.real_premium_price * std::numeric_limits<double>::epsilon());
    }
}

TEST_CASE("deflating then filtering equals filtering a pre-deflated copy") {
    std::map<YearMonth, double> levels;
    for (int y = 1990; y <= 2010; ++y)
        for (int m = 1; m <= 12; ++m) levels[{y, m}] = 100.0 + (y - 1990) * 3.0 + m * 0.1;
    const CpiTable cpi({2010, 1}, levels);
    testing::Rng rng(9);
    std::lognormal_distribution<double> price(std::log(15000.0), 0.8);
    std::vector<SaleRecord> recs;
    for (int i = 0; i < 300; ++i) {
        SaleRecord r;
        r.sale_id = std::to_string(i);
        r.sale_date = {1990 + i % 20, 1 + i % 12};
        r.premium_price = price(rng);
        r.height_cm = 20.0 + i % 50;
        r.width_cm = 30.0;
        recs.push_back(r);
    }
    std::vector<AdjustedSale> forward, reversed;
    for (const auto& r : recs) forward.push_back(to_real_premium(r, cpi, PremiumSchedule::flat()));
    for (auto it = recs.rbegin(); it != recs.rend(); ++it) {
        reversed.push_back(to_real_premium(*it, cpi, PremiumSchedule::flat()));
    }
    const auto a = apply_filters(forward, FilterConfig{});
    const auto b = apply_filters(reversed, FilterConfig{});
    REQUIRE(a.kept.size() == b.kept.size());
    for (std::size_t i = 0; i < a.kept.size(); ++i) {
        const auto& x = a.kept[i];
        const auto& y = b.kept[b.kept.size() - 1 - i];
        CHECK(x.sale.sale_id == y.sale.sale_id);
        CHECK(x.real_premium_price == y.real_premium_price);
    }
}

TEST_CASE("CPI table validation") {
    CHECK_THROWS_AS(CpiTable({2010, 1}, {{{2009, 12}, 100.0}}), CoverageError);
    CHECK_THROWS_AS(CpiTable({2010, 1}, {{{2010, 1}, 0.0}}), DomainError);
    const CpiTable cpi({2010, 1}, {{{2009, 12}, 99.0}, {{2010, 1}, 100.0}, {{2010, 3}, 101.0}});
    CHECK_THROWS_AS(cpi.require_contiguous({2009, 12}, {2010, 3}), CoverageError);
    CHECK_NOTHROW(cpi.require_contiguous({2009, 12}, {2010, 1}));

    std::istringstream in("year,month,cpi_level\n2010,1,217.488\n2009,12,215.949\n");
    const CpiTable parsed = parse_cpi_csv(in, {2010, 1});
    CHECK(parsed.deflator({2009, 12}) == doctest::Approx(217.488 / 215.949));
}

TEST_CASE("artists file") {
    std::istringstream in("artist_id,name,birth_year,death_year\nrenoir,Pierre-Auguste Renoir,1841,1919\nx,X,1950,\n");
    const auto a = parse_artists_csv(in);
    REQUIRE(a.size() == 2);
    CHECK(a[0].birth_year == 1841);
    CHECK(*a[0].death_year == 1919);
    CHECK_FALSE(a[1].death_year);
    std::istringstream bad("artist_id,name,birth_year,death_year\nq,Q,1900,1800\n");
    CHECK_THROWS_AS((void)parse_artists_csv(bad), SchemaError);
}

TEST_CASE("year-month helpers") {
    CHECK(YearMonth::parse("2010-01") == YearMonth{2010, 1});
    CHECK(YearMonth::from_ordinal(YearMonth{1999, 12}.ordinal() + 1) == YearMonth{2000, 1});
    CHECK(YearMonth{1985, 3}.to_string() == "1985-03");
    CHECK_THROWS_AS((void)YearMonth::parse("2010-13"), DomainError);
}
