#include "generators.hpp"

#include <cmath>

#include "apv/descriptive.hpp"

namespace apv::testing {

AdjustedSale make_sale(const SaleSpec& spec) {
    static std::size_t counter = 0;
    AdjustedSale s;
    s.sale.sale_id = spec.sale_id.empty() ? "s" + std::to_string(++counter) : spec.sale_id;
    s.sale.artist_id = spec.artist;
    s.sale.painting_id = spec.painting_id;
    s.sale.title = spec.title;
    s.sale.sale_date = {spec.year, spec.month};
    s.sale.execution_year = spec.execution_year;
    s.sale.premium_price = spec.price;
    s.sale.height_cm = spec.height;
    s.sale.width_cm = spec.width;
    s.sale.is_canvas = spec.canvas;
    s.sale.subjects = spec.subjects;
    s.real_premium_price = spec.price;
    s.area_cm2 = spec.height * spec.width;
    s.apv = apv::apv(spec.price, spec.height, spec.width);
    return s;
}

AdjustedSale sale_with_apv(double apv_value, int year, int month, const std::string& artist) {
    SaleSpec spec;
    spec.price = apv_value * 100.0;
    spec.height = 10.0;
    spec.width = 10.0;
    spec.year = year;
    spec.month = month;
    spec.artist = artist;
    return make_sale(spec);
}

std::vector<double> lognormal_sample(Rng& rng, std::size_t n, double mu, double sigma) {
    std::lognormal_distribution<double> d(mu, sigma);
    std::vector<double> out(n);
    for (double& v : out) v = d(rng);
    return out;
}

LinearSample hedonic_sample(Rng& rng, std::size_t n, double noise_sd) {
    std::uniform_real_distribution<double> age_d(20.0, 70.0);
    std::normal_distribution<double> log_area_d(7.5, 0.6);
    std::bernoulli_distribution canvas_d(0.6);
    std::uniform_int_distribution<int> year_d(0, 3);
    std::normal_distribution<double> noise(0.0, noise_sd);

    LinearSample s;
    s.labels = {"(intercept)", "age", "age^2", "log_area", "canvas", "year:1", "year:2", "year:3"};
    s.beta = {8.0, 0.05, -0.0006, 0.7, 0.25, 0.10, -0.05, 0.30};
    std::vector<std::vector<double>> cols(s.labels.size(), std::vector<double>(n));
    s.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double age = age_d(rng);
        const int year = year_d(rng);
        const double row[] = {1.0,
                              age,
                              age * age,
                              log_area_d(rng),
                              canvas_d(rng) ? 1.0 : 0.0,
                              year == 1 ? 1.0 : 0.0,
                              year == 2 ? 1.0 : 0.0,
                              year == 3 ? 1.0 : 0.0};
        double yi = 0.0;
        for (std::size_t c = 0; c < cols.size(); ++c) {
            cols[c][i] = row[c];
            yi += row[c] * s.beta[c];
        }
        s.y[i] = yi + noise(rng);
    }
    for (const auto& c : cols) s.x.append_col(c);
    return s;
}

LinearSample white_sample(Rng& rng, std::size_t n, bool heteroscedastic) {
    std::uniform_real_distribution<double> x1_d(1.0, 5.0);
    std::normal_distribution<double> x2_d(0.0, 1.0);
    std::normal_distribution<double> z(0.0, 1.0);

    LinearSample s;
    s.labels = {"(intercept)", "x1", "x2"};
    s.beta = {1.0, 0.5, -0.3};
    std::vector<double> ones(n, 1.0), x1(n), x2(n);
    s.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        x1[i] = x1_d(rng);
        x2[i] = x2_d(rng);
        const double sd = heteroscedastic ? x1[i] : 1.0;
        s.y[i] = s.beta[0] + s.beta[1] * x1[i] + s.beta[2] * x2[i] + sd * z(rng);
    }
    s.x.append_col(ones);
    s.x.append_col(x1);
    s.x.append_col(x2);
    return s;
}

std::vector<AdjustedSale> repeat_sales_market(Rng& rng, const RepeatMarketOptions& o) {
    std::normal_distribution<double> z(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::lognormal_distribution<double> side(std::log(60.0), 0.3);

    std::vector<double> market(static_cast<std::size_t>(o.years));
    double level = 0.0;
    for (double& m : market) {
        m = level;
        level += o.trend + o.market_sd * z(rng);
    }

    struct Painting {
        std::string id;
        double height;
        double width;
        double log_apv;
        double last_sale_log_apv;
    };
    std::vector<Painting> live;
    std::vector<AdjustedSale> sales;
    int next_id = 0;

    auto record = [&](const Painting& p, int year) {
        SaleSpec spec;
        spec.year = 1980 + year;
        spec.height = p.height;
        spec.width = p.width;
        spec.price = std::exp(p.log_apv) * p.height * p.width;
        spec.painting_id = p.id;
        spec.artist = "market";
        sales.push_back(make_sale(spec));
    };

    for (int t = 0; t < o.years; ++t) {
        const auto ti = static_cast<std::size_t>(t);
        if (t > 0) {
            const double step = market[ti] - market[ti - 1];
            for (Painting& p : live) {
                p.log_apv += step + o.idiosyncratic_sd * z(rng);
                const double gain = p.log_apv - p.last_sale_log_apv;
                const double prob = 1.0 / (1.0 + std::exp(-(o.resale_intercept + o.resale_slope * gain)));
                if (u(rng) < prob) {
                    record(p, t);
                    p.last_sale_log_apv = p.log_apv;
                }
            }
        }
        for (int k = 0; k < o.new_paintings_per_year; ++k) {
            Painting p;
            p.id = "p" + std::to_string(next_id++);
            p.height = side(rng);
            p.width = side(rng);
            p.log_apv = 6.0 + market[ti] + 0.5 * z(rng);
            p.last_sale_log_apv = p.log_apv;
            record(p, t);
            live.push_back(std::move(p));
        }
    }
    return sales;
}

namespace {

struct Traits {
    double height;
    double width;
    int age;
    bool canvas;
};

Traits draw_traits(Rng& rng, double log_area_shift, double age_shift) {
    std::normal_distribution<double> z(0.0, 1.0);
    std::bernoulli_distribution canvas(0.7);
    Traits t;
    const double log_area = std::log(2000.0) + log_area_shift + 0.5 * z(rng);
    const double log_aspect = 0.15 * z(rng);
    t.height = std::exp(0.5 * (log_area + log_aspect));
    t.width = std::exp(0.5 * (log_area - log_aspect));
    t.age = static_cast<int>(std::clamp(std::round(45.0 + age_shift + 10.0 * z(rng)), 18.0, 78.0));
    t.canvas = canvas(rng);
    return t;
}

double log_price(const Traits& t, double year_effect) {
    const double area_k = t.height * t.width / 1000.0;
    const double age_c = (t.age - 40.0) / 10.0;
    return 9.0 + year_effect + 0.9 * area_k - 0.04 * area_k * area_k + 0.3 * (t.height / t.width) +
           0.15 * age_c - 0.08 * age_c * age_c + 0.2 * (t.canvas ? 1.0 : 0.0);
}

}  // namespace

HedonicMarket hedonic_market(Rng& rng, const HedonicMarketOptions& o) {
    std::normal_distribution<double> z(0.0, 1.0);
    HedonicMarket m;
    const int birth = 1840;
    m.artists.push_back({"painter", "Painter", birth, 1920});

    std::vector<Traits> fixed;
    if (o.constant_characteristics) {
        for (int k = 0; k < o.sales_per_year; ++k) fixed.push_back(draw_traits(rng, 0.0, 0.0));
    }

    double delta = 0.0;
    for (int t = 0; t < o.years; ++t) {
        if (t > 0) delta += o.year_effect_sd * z(rng);
        m.year_effects.push_back(delta);
        const double area_shift = 0.35 * z(rng);
        const double age_shift = 5.0 * z(rng);
        for (int k = 0; k < o.sales_per_year; ++k) {
            const Traits tr = o.constant_characteristics ? fixed[static_cast<std::size_t>(k)]
                                                         : draw_traits(rng, area_shift, age_shift);
            SaleSpec spec;
            spec.year = o.first_year + t;
            spec.height = tr.height;
            spec.width = tr.width;
            spec.canvas = tr.canvas;
            spec.execution_year = birth + tr.age;
            spec.artist = "painter";
            spec.price = std::exp(log_price(tr, delta) + o.noise_sd * z(rng));
            m.sales.push_back(make_sale(spec));
        }
    }
    return m;
}

DesignSpec hedonic_market_design() {
    DesignSpec spec;
    spec.age_degree = 2;
    spec.geometry = {{Geometry::area, 2},
                     {Geometry::height, 0},
                     {Geometry::width, 0},
                     {Geometry::aspect_ratio, 1},
                     {Geometry::diagonal, 0}};
    spec.subject_dummies.clear();
    spec.painter_dummies = false;
    return spec;
}

}  // namespace apv::testing
