#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "apv/ingest.hpp"
#include "apv/median_inference.hpp"

namespace apv {

struct OrientationSplit {
    std::vector<AdjustedSale> portrait;   ///< height > width
    std::vector<AdjustedSale> landscape;  ///< width > height
    std::vector<AdjustedSale> excluded_square;
};

[[nodiscard]] OrientationSplit orientation_split(const std::vector<AdjustedSale>& sales);

/// A yes/no partition of one artist's sales with the median test of
/// yes minus no, or NA when either side is too small.
struct CohortComparison {
    std::string name;
    std::size_t yes_count = 0;
    std::optional<double> yes_median;
    std::size_t no_count = 0;
    std::optional<double> no_median;
    std::optional<MedianTestResult> test;  ///< empty means NA
    std::string na_reason;
};

struct CohortOptions {
    std::size_t min_side = 10;
    const MedianSeEstimator* estimator = nullptr;  ///< null selects the default
    SignificanceThresholds thresholds;
};

/// Flagged ("yes") versus unflagged ("no") sales for a subject.
[[nodiscard]] CohortComparison subject_comparison(const std::vector<AdjustedSale>& sales,
                                                  Subject flag, const CohortOptions& options = {});

/// Same comparison with the flag inverted ("no" becomes "yes").
[[nodiscard]] CohortComparison subject_comparison_inverted(const std::vector<AdjustedSale>& sales,
                                                           Subject flag,
                                                           const CohortOptions& options = {});

/// Portrait ("yes") versus landscape ("no"); square paintings are left out.
[[nodiscard]] CohortComparison orientation_comparison(const std::vector<AdjustedSale>& sales,
                                                      const CohortOptions& options = {});

struct LifecyclePoint {
    int age = 0;
    double median_apv = 0.0;
    std::size_t n = 0;
};

struct LifecycleCurve {
    std::string artist_id;
    std::vector<LifecyclePoint> points;  ///< strictly increasing age
    std::size_t min_count = 5;
    int window = 1;
    std::size_t missing_execution_year = 0;  ///< artist sales left out for lack of a date
};

struct LifecycleOptions {
    std::size_t min_count = 5;
    int window = 1;  ///< odd; ages within +-window/2 share a moving median
};

/// Median APV by age at execution for one artist. Sales of other artists are
/// ignored. Throws InsufficientData when no sale of the artist has an
/// execution year, DomainError for an even or nonpositive window.
[[nodiscard]] LifecycleCurve lifecycle_curve(const std::vector<AdjustedSale>& sales,
                                             const ArtistRecord& artist,
                                             const LifecycleOptions& options = {});

}  // namespace apv
