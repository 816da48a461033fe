#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "apv/cohorts.hpp"
#include "apv/hedonic.hpp"
#include "apv/ingest.hpp"
#include "apv/median_inference.hpp"
#include "apv/returns.hpp"

namespace apv {

/// Environment variable naming the default config file.
inline constexpr const char* kConfigEnvVar = "APV_CONFIG";

struct RunConfig {
    std::filesystem::path sales_path;
    std::filesystem::path cpi_path;
    std::filesystem::path artists_path;
    std::filesystem::path output_dir = "apv_out";
    std::optional<YearMonth> base_month;  ///< defaults to the last CPI month
    FilterConfig filter;
    PremiumSchedule premium = PremiumSchedule::flat();
    DesignSpec design;
    IndexRule index;
    SignificanceThresholds thresholds;
    std::string estimator = "bonett-price";
    std::size_t cohort_min_side = 10;
    LifecycleOptions lifecycle;
    std::uint64_t seed = 1;

    /// Applies one setting. Paths are resolved against `base_dir` when
    /// relative. Throws SchemaError on an unknown key and DomainError on a
    /// bad value.
    void set(const std::string& key, const std::string& value, const std::filesystem::path& base_dir = {});

    void validate() const;

    /// Every analysis setting as sorted "key=value" lines; paths excluded.
    [[nodiscard]] std::string canonical() const;

    /// Names accepted by set().
    [[nodiscard]] static const std::vector<std::string>& keys();
};

/// Reads "key = value" lines; '#' starts a comment. Relative paths resolve
/// against the file's directory.
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path);
void apply_config_file(RunConfig& cfg, const std::filesystem::path& path);

/// 64-bit FNV-1a, as 16 hex digits.
[[nodiscard]] std::string fnv1a_hex(const std::string& bytes);

/// Digest over the canonical settings and the bytes of every input file.
[[nodiscard]] std::string config_digest(const RunConfig& cfg);

}  // namespace apv
