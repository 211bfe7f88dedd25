#pragma once

#include "retint/volatility.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace retint {

/// Waiting times (in sample positions) between successive exceedances of one threshold.
struct IntervalSample {
    double threshold = 0.0;
    std::vector<std::int64_t> intervals;
    double mean_interval = 0.0;
    std::size_t source_length = 0;
    std::size_t exceedances = 0;

    [[nodiscard]] std::size_t size() const noexcept { return intervals.size(); }
    /// tau / <tau> for every interval, in order.
    [[nodiscard]] std::vector<double> scaled() const;
};

/// Log-binned density of scaled intervals. Empty bins are omitted.
struct PdfTable {
    std::vector<double> lower;    ///< bin lower edge
    std::vector<double> upper;    ///< bin upper edge
    std::vector<double> x;        ///< mean of the scaled values inside the bin
    std::vector<double> density;
    std::vector<std::size_t> count;
    std::size_t total = 0;
    bool degenerate = false;      ///< all values identical; a single nominal bin

    [[nodiscard]] std::size_t size() const noexcept { return x.size(); }
};

/// Right-continuous empirical CDF over distinct sorted values.
struct CdfTable {
    std::vector<double> x;
    std::vector<double> F;
    std::vector<std::size_t> cumulative;  ///< points <= x[i]
    std::size_t n = 0;

    [[nodiscard]] bool empty() const noexcept { return x.empty(); }
    [[nodiscard]] double min() const { return x.front(); }
    [[nodiscard]] double max() const { return x.back(); }
    /// F(v): fraction of points <= v.
    [[nodiscard]] double operator()(double v) const;
    /// Number of sample points with lo <= value <= hi.
    [[nodiscard]] std::size_t count_within(double lo, double hi) const;
};

/// Exceedance means v(t) > q. With `cross_day == false`, pairs whose exceedances fall on
/// different days are discarded.
[[nodiscard]] IntervalSample extract_intervals(const NormVolSeries& v, double q, bool cross_day = true);
[[nodiscard]] IntervalSample extract_intervals(std::span<const double> values, double q);

[[nodiscard]] PdfTable scaled_pdf(const IntervalSample& s, int bins_per_decade = 20);
[[nodiscard]] PdfTable log_binned_pdf(std::span<const double> values, int bins_per_decade);

[[nodiscard]] CdfTable empirical_cdf(const IntervalSample& s);
/// CDF of arbitrary values, used directly by the KS routines.
[[nodiscard]] CdfTable make_cdf(std::span<const double> values);

/// Mean interval at threshold q, or 0 when fewer than two exceedances exist.
[[nodiscard]] double mean_interval_at(std::span<const double> values, double q);

struct ThresholdSearch {
    double threshold = 0.0;
    double achieved_mean = 0.0;
};

/// Bisects q until <tau>(q) is within `tol` of `target_mean`.
[[nodiscard]] ThresholdSearch threshold_for_mean(const NormVolSeries& v, double target_mean, double tol = 0.5);
[[nodiscard]] ThresholdSearch threshold_for_mean(std::span<const double> values, double target_mean,
                                                 double tol = 0.5);

}  // namespace retint
