#pragma once

#include "retint/kstest.hpp"
#include "retint/moments.hpp"
#include "retint/semodel.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace retint {

/// Everything a pipeline run depends on. Serialized as a flat JSON object.
struct RunConfig {
    std::vector<std::string> inputs;
    std::string calendar;             ///< empty: built-in two-session calendar
    std::string output_dir = "retint_out";
    int utc_offset_minutes = 0;

    std::vector<double> thresholds{2.0, 3.0, 4.0, 5.0};
    double q_min = 1.0;
    double q_max = 5.0;
    double q_step = 0.1;
    int bins_per_decade = 20;
    double region_lo = 10.0;
    double region_hi = 100.0;

    std::size_t n_boot = 1000;
    std::uint64_t seed = 20100101;
    FitMode fit_mode = FitMode::mle;

    std::vector<double> moment_orders{0.25, 0.5, 1.5, 2.0};
    std::vector<double> spectrum_orders{0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0, 2.5, 3.0, 3.5, 4.0};
    std::vector<double> ess_n{1.0};
    std::vector<double> mean_targets{10.0, 30.0, 100.0};
    double threshold_tol = 0.5;

    bool drop_overnight = true;
    bool cross_day = true;
    bool refit = false;
    CvCounts cv_counts = CvCounts::overlap;

    /// q_min, q_min + q_step, ..., q_max (inclusive within rounding).
    [[nodiscard]] std::vector<double> q_grid() const;
    [[nodiscard]] Region region() const { return {region_lo, region_hi}; }

    /// Flat JSON, keys in declaration order; parsing it back yields an equal config.
    [[nodiscard]] std::string to_json() const;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

struct ConfigIssue {
    std::string field;
    std::string message;
};

struct ConfigResult {
    std::optional<RunConfig> config;  ///< set only when `issues` is empty
    std::vector<ConfigIssue> issues;

    [[nodiscard]] bool ok() const noexcept { return issues.empty(); }
    /// One "field: message" per line.
    [[nodiscard]] std::string describe() const;
};

/// Fills defaults, then checks every field; all violations are collected.
[[nodiscard]] ConfigResult validate_config(std::string_view json_text);
/// Range checks on an already-typed config.
[[nodiscard]] std::vector<ConfigIssue> check_config(const RunConfig& config);

[[nodiscard]] std::string_view to_string(CvCounts counts) noexcept;

}  // namespace retint
