#pragma once

#include "retint/intervals.hpp"
#include "retint/semodel.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace retint {

/// Which sample sizes enter the critical value of a two-sample comparison.
enum class CvCounts {
    overlap,  ///< points inside the common support only
    whole,    ///< full sample sizes
};

struct KsResult {
    double statistic = 0.0;
    double critical = 0.0;
    std::size_t m = 0;
    std::size_t n = 0;
    double overlap_lo = 0.0;
    double overlap_hi = 0.0;
    bool accept = true;  ///< statistic < critical (5% level)
};

/// 5% critical value 1.36 / sqrt(mn / (m + n)).
[[nodiscard]] double critical_value(std::size_t m, std::size_t n);

/// Largest CDF gap over pooled points inside [max(min_i, min_j), min(max_i, max_j)].
[[nodiscard]] KsResult two_sample_ks(const CdfTable& lhs, const CdfTable& rhs, CvCounts counts = CvCounts::overlap);

struct KsPair {
    double q_i = 0.0;
    double q_j = 0.0;
    KsResult result;
};

struct KsMatrix {
    std::vector<KsPair> pairs;

    /// True when every pair accepts the common-distribution hypothesis.
    [[nodiscard]] bool scaling() const noexcept;
};

/// Two-sample KS for every unordered threshold pair, in input order (i < j).
[[nodiscard]] KsMatrix ks_matrix(std::span<const IntervalSample> samples, CvCounts counts = CvCounts::overlap);

/// sup |F_empirical - se_cdf| evaluated on both sides of every step.
[[nodiscard]] double one_sample_ks(std::span<const double> sample, const SEModel& model);
/// Same statistic for a sample that is already sorted ascending.
[[nodiscard]] double one_sample_ks_sorted(std::span<const double> sorted, const SEModel& model);

struct BootstrapOptions {
    std::size_t n_boot = 1000;
    std::uint64_t seed = 0;
    bool refit = false;  ///< refit every synthetic sample before measuring its distance
    unsigned jobs = 1;
};

/// Goodness-of-fit p-value: fraction of synthetic samples from `model` whose KS distance
/// strictly exceeds that of `sample`.
///
/// Replicate r draws with seed derive_seed(options.seed, "bootstrap", r), so results do
/// not depend on the thread count. Replicates whose refit fails are dropped and counted;
/// p is taken over the surviving replicates.
[[nodiscard]] FitReport bootstrap_pvalue(std::span<const double> sample, const SEModel& model,
                                         const BootstrapOptions& options);

}  // namespace retint
