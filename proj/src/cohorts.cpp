#include "apv/cohorts.hpp"

#include <map>

#include "apv/descriptive.hpp"
#include "apv/error.hpp"

namespace apv {

OrientationSplit orientation_split(const std::vector<AdjustedSale>& sales) {
    OrientationSplit out;
    for (const AdjustedSale& s : sales) {
        if (s.sale.height_cm > s.sale.width_cm) {
            out.portrait.push_back(s);
        } else if (s.sale.width_cm > s.sale.height_cm) {
            out.landscape.push_back(s);
        } else {
            out.excluded_square.push_back(s);
        }
    }
    return out;
}

namespace {

std::vector<double> apvs_of(const std::vector<AdjustedSale>& sales) {
    std::vector<double> out;
    out.reserve(sales.size());
    for (const AdjustedSale& s : sales) out.push_back(s.apv);
    return out;
}

CohortComparison compare(std::string name, const std::vector<double>& yes,
                         const std::vector<double>& no, const CohortOptions& options) {
    CohortComparison c;
    c.name = std::move(name);
    c.yes_count = yes.size();
    c.no_count = no.size();
    if (!yes.empty()) c.yes_median = median(yes);
    if (!no.empty()) c.no_median = median(no);
    if (yes.size() < options.min_side || no.size() < options.min_side) {
        c.na_reason = "fewer than " + std::to_string(options.min_side) + " sales";
        return c;
    }
    const MedianSeEstimator& est = options.estimator ? *options.estimator : default_median_se();
    try {
        c.test = median_diff_test(yes, no, est, options.thresholds);
    } catch (const DegenerateInference& e) {
        c.na_reason = e.what();
    }
    return c;
}

CohortComparison subject_split(const std::vector<AdjustedSale>& sales, Subject flag, bool want,
                               const CohortOptions& options) {
    std::vector<double> yes, no;
    for (const AdjustedSale& s : sales) {
        (s.sale.subjects.get(flag) == want ? yes : no).push_back(s.apv);
    }
    std::string name = want ? subject_name(flag) : std::string("no_") + subject_name(flag);
    return compare(std::move(name), yes, no, options);
}

}  // namespace

CohortComparison subject_comparison(const std::vector<AdjustedSale>& sales, Subject flag,
                                    const CohortOptions& options) {
    return subject_split(sales, flag, true, options);
}

CohortComparison subject_comparison_inverted(const std::vector<AdjustedSale>& sales, Subject flag,
                                             const CohortOptions& options) {
    return subject_split(sales, flag, false, options);
}

CohortComparison orientation_comparison(const std::vector<AdjustedSale>& sales,
                                        const CohortOptions& options) {
    const OrientationSplit split = orientation_split(sales);
    return compare("portrait_vs_landscape", apvs_of(split.portrait), apvs_of(split.landscape), options);
}

LifecycleCurve lifecycle_curve(const std::vector<AdjustedSale>& sales, const ArtistRecord& artist,
                               const LifecycleOptions& options) {
    if (options.window < 1 || options.window % 2 == 0) {
        throw DomainError("lifecycle smoothing window must be a positive odd number");
    }
    LifecycleCurve curve;
    curve.artist_id = artist.artist_id;
    curve.min_count = options.min_count;
    curve.window = options.window;

    std::map<int, std::vector<double>> by_age;
    for (const AdjustedSale& s : sales) {
        if (s.sale.artist_id != artist.artist_id) continue;
        if (!s.sale.execution_year) {
            ++curve.missing_execution_year;
            continue;
        }
        by_age[*s.sale.execution_year - artist.birth_year].push_back(s.apv);
    }
    if (by_age.empty()) {
        throw InsufficientData("no sale of " + artist.artist_id + " carries an execution year");
    }

    std::vector<LifecyclePoint> raw;
    for (const auto& [age, values] : by_age) {
        if (values.size() < options.min_count) continue;
        raw.push_back({age, median(values), values.size()});
    }
    if (options.window == 1) {
        curve.points = std::move(raw);
        return curve;
    }

    const int half = options.window / 2;
    for (const LifecyclePoint& p : raw) {
        std::vector<double> neighbourhood;
        for (const LifecyclePoint& q : raw) {
            if (q.age >= p.age - half && q.age <= p.age + half) neighbourhood.push_back(q.median_apv);
        }
        curve.points.push_back({p.age, median(neighbourhood), p.n});
    }
    return curve;
}

}  // namespace apv
