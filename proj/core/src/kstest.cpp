#include "retint/kstest.hpp"

#include "retint/error.hpp"
#include "retint/seeding.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>

namespace retint {

double critical_value(std::size_t m, std::size_t n) {
    if (m == 0 || n == 0) throw Error(ErrorKind::domain, "critical value needs m, n >= 1");
    const auto md = static_cast<double>(m);
    const auto nd = static_cast<double>(n);
    return 1.36 / std::sqrt(md * nd / (md + nd));
}

KsResult two_sample_ks(const CdfTable& lhs, const CdfTable& rhs, CvCounts counts) {
    if (lhs.empty() || rhs.empty()) throw Error(ErrorKind::empty_series, "KS test needs two non-empty samples");
    KsResult r;
    r.overlap_lo = std::max(lhs.min(), rhs.min());
    r.overlap_hi = std::min(lhs.max(), rhs.max());
    if (r.overlap_lo > r.overlap_hi) throw Error(ErrorKind::no_overlap, "the two samples do not overlap");

    double d = 0.0;
    auto scan = [&](const CdfTable& t) {
        auto it = std::lower_bound(t.x.begin(), t.x.end(), r.overlap_lo);
        for (; it != t.x.end() && *it <= r.overlap_hi; ++it) d = std::max(d, std::abs(lhs(*it) - rhs(*it)));
    };
    scan(lhs);
    scan(rhs);
    r.statistic = d;
    if (counts == CvCounts::overlap) {
        r.m = lhs.count_within(r.overlap_lo, r.overlap_hi);
        r.n = rhs.count_within(r.overlap_lo, r.overlap_hi);
    } else {
        r.m = lhs.n;
        r.n = rhs.n;
    }
    r.critical = critical_value(r.m, r.n);
    r.accept = r.statistic < r.critical;
    return r;
}

bool KsMatrix::scaling() const noexcept {
    return std::all_of(pairs.begin(), pairs.end(), [](const KsPair& p) { return p.result.accept; });
}

KsMatrix ks_matrix(std::span<const IntervalSample> samples, CvCounts counts) {
    if (samples.size() < 2) throw Error(ErrorKind::domain, "KS matrix needs at least two thresholds");
    std::vector<CdfTable> cdfs;
    cdfs.reserve(samples.size());
    for (const auto& s : samples) cdfs.push_back(empirical_cdf(s));
    KsMatrix out;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        for (std::size_t j = i + 1; j < samples.size(); ++j) {
            try {
                out.pairs.push_back({samples[i].threshold, samples[j].threshold, two_sample_ks(cdfs[i], cdfs[j], counts)});
            } catch (const Error& e) {
                throw Error(e.kind(), "pair (" + std::to_string(samples[i].threshold) + ", " +
                                          std::to_string(samples[j].threshold) + "): " + e.what());
            }
        }
    }
    return out;
}

double one_sample_ks_sorted(std::span<const double> sorted, const SEModel& model) {
    if (sorted.empty()) throw Error(ErrorKind::empty_series, "KS test needs a non-empty sample");
    const auto n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = se_cdf(model, sorted[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

double one_sample_ks(std::span<const double> sample, const SEModel& model) {
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    return one_sample_ks_sorted(sorted, model);
}

FitReport bootstrap_pvalue(std::span<const double> sample, const SEModel& model, const BootstrapOptions& options) {
    if (options.n_boot < 100) throw Error(ErrorKind::domain, "bootstrap needs n_boot >= 100");
    if (sample.empty()) throw Error(ErrorKind::empty_series, "bootstrap needs a non-empty sample");
    const SEModel reference = model.constrained ? model : model.as_normalized();

    FitReport report;
    report.model = model;
    report.n = sample.size();
    report.n_boot = options.n_boot;
    report.seed = options.seed;
    report.refit = options.refit;
    report.ks = one_sample_ks(sample, reference);

    // 1 = exceeded, 0 = did not, -1 = dropped.
    std::vector<signed char> outcome(options.n_boot, 0);
    parallel_for(options.n_boot, options.jobs, [&](std::size_t r) {
        std::vector<double> synthetic = se_sample(reference, sample.size(), derive_seed(options.seed, "bootstrap", r));
        SEModel against = reference;
        if (options.refit) {
            try {
                against = fit_mle(synthetic);
            } catch (const Error&) {
                outcome[r] = -1;
                return;
            }
        }
        std::sort(synthetic.begin(), synthetic.end());
        outcome[r] = one_sample_ks_sorted(synthetic, against) > report.ks ? 1 : 0;
    });

    std::size_t exceeded = 0;
    for (auto o : outcome) {
        if (o < 0) {
            ++report.dropped;
        } else if (o > 0) {
            ++exceeded;
        }
    }
    const std::size_t used = options.n_boot - report.dropped;
    if (used == 0) throw Error(ErrorKind::fit_failure, "every bootstrap replicate failed to refit");
    report.p = static_cast<double>(exceeded) / static_cast<double>(used);
    return report;
}

}  // namespace retint
