#include "retint/intervals.hpp"

#include "retint/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

namespace retint {

namespace {

void check_threshold(double q) {
    if (!(q > 0.0) || !std::isfinite(q)) throw Error(ErrorKind::domain, "threshold q must be a positive number");
}

IntervalSample finish(IntervalSample s) {
    if (s.intervals.empty()) {
        throw InsufficientEventsError(s.exceedances, "threshold " + std::to_string(s.threshold) + " yields " +
                                                         std::to_string(s.exceedances) +
                                                         " exceedance(s) and no usable interval");
    }
    double sum = 0.0;
    for (auto tau : s.intervals) sum += static_cast<double>(tau);
    s.mean_interval = sum / static_cast<double>(s.intervals.size());
    return s;
}

}  // namespace

std::vector<double> IntervalSample::scaled() const {
    std::vector<double> x;
    x.reserve(intervals.size());
    for (auto tau : intervals) x.push_back(static_cast<double>(tau) / mean_interval);
    return x;
}

IntervalSample extract_intervals(std::span<const double> values, double q) {
    check_threshold(q);
    IntervalSample s;
    s.threshold = q;
    s.source_length = values.size();
    std::int64_t previous = -1;
    for (std::size_t t = 0; t < values.size(); ++t) {
        if (!(values[t] > q)) continue;
        ++s.exceedances;
        const auto pos = static_cast<std::int64_t>(t);
        if (previous >= 0) s.intervals.push_back(pos - previous);
        previous = pos;
    }
    return finish(std::move(s));
}

IntervalSample extract_intervals(const NormVolSeries& v, double q, bool cross_day) {
    if (cross_day || v.day.size() != v.values.size()) return extract_intervals(std::span<const double>(v.values), q);
    check_threshold(q);
    IntervalSample s;
    s.threshold = q;
    s.source_length = v.size();
    std::int64_t previous = -1;
    for (std::size_t t = 0; t < v.size(); ++t) {
        if (!(v.values[t] > q)) continue;
        ++s.exceedances;
        const auto pos = static_cast<std::int64_t>(t);
        if (previous >= 0 && v.day[static_cast<std::size_t>(previous)] == v.day[t]) {
            s.intervals.push_back(pos - previous);
        }
        previous = pos;
    }
    return finish(std::move(s));
}

PdfTable log_binned_pdf(std::span<const double> values, int bins_per_decade) {
    if (bins_per_decade < 1) throw Error(ErrorKind::domain, "bins_per_decade must be >= 1");
    if (values.empty()) throw Error(ErrorKind::empty_series, "cannot bin an empty sample");
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    if (!(lo > 0.0)) throw Error(ErrorKind::domain, "log binning needs strictly positive values");

    const double b = bins_per_decade;
    PdfTable table;
    table.total = values.size();
    const auto n = static_cast<double>(values.size());
    if (lo == hi) {
        const double half = std::pow(10.0, 0.5 / b);
        table.degenerate = true;
        table.lower.push_back(lo / half);
        table.upper.push_back(lo * half);
        table.x.push_back(lo);
        table.count.push_back(values.size());
        table.density.push_back(1.0 / (table.upper[0] - table.lower[0]));
        return table;
    }

    const double span_decades = std::log10(hi / lo);
    const auto bins = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(b * span_decades - 1e-12)));
    std::vector<std::size_t> counts(bins, 0);
    std::vector<double> sums(bins, 0.0);
    for (double v : values) {
        const double k = std::floor(b * std::log10(v / lo));
        const auto idx = std::min(bins - 1, static_cast<std::size_t>(std::max(0.0, k)));
        ++counts[idx];
        sums[idx] += v;
    }
    for (std::size_t k = 0; k < bins; ++k) {
        if (counts[k] == 0) continue;
        const double lower = lo * std::pow(10.0, static_cast<double>(k) / b);
        const double upper = k + 1 == bins ? std::max(hi, lo * std::pow(10.0, static_cast<double>(k + 1) / b))
                                           : lo * std::pow(10.0, static_cast<double>(k + 1) / b);
        table.lower.push_back(lower);
        table.upper.push_back(upper);
        table.x.push_back(sums[k] / static_cast<double>(counts[k]));
        table.count.push_back(counts[k]);
        table.density.push_back(static_cast<double>(counts[k]) / (n * (upper - lower)));
    }
    return table;
}

PdfTable scaled_pdf(const IntervalSample& s, int bins_per_decade) {
    return log_binned_pdf(s.scaled(), bins_per_decade);
}

CdfTable make_cdf(std::span<const double> values) {
    if (values.empty()) throw Error(ErrorKind::empty_series, "cannot build a CDF from an empty sample");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    CdfTable cdf;
    cdf.n = sorted.size();
    const auto n = static_cast<double>(cdf.n);
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
        cdf.x.push_back(sorted[i]);
        cdf.cumulative.push_back(i + 1);
        cdf.F.push_back(static_cast<double>(i + 1) / n);
    }
    return cdf;
}

CdfTable empirical_cdf(const IntervalSample& s) { return make_cdf(s.scaled()); }

double CdfTable::operator()(double v) const {
    const auto it = std::upper_bound(x.begin(), x.end(), v);
    if (it == x.begin()) return 0.0;
    return F[static_cast<std::size_t>(it - x.begin()) - 1];
}

std::size_t CdfTable::count_within(double lo, double hi) const {
    if (hi < lo) return 0;
    const auto upto = [this](auto it) -> std::size_t {
        return it == x.begin() ? 0 : cumulative[static_cast<std::size_t>(it - x.begin()) - 1];
    };
    return upto(std::upper_bound(x.begin(), x.end(), hi)) - upto(std::lower_bound(x.begin(), x.end(), lo));
}

double mean_interval_at(std::span<const double> values, double q) {
    std::size_t first = 0;
    std::size_t last = 0;
    std::size_t count = 0;
    for (std::size_t t = 0; t < values.size(); ++t) {
        if (!(values[t] > q)) continue;
        if (count == 0) first = t;
        last = t;
        ++count;
    }
    if (count < 2) return 0.0;
    return static_cast<double>(last - first) / static_cast<double>(count - 1);
}

ThresholdSearch threshold_for_mean(std::span<const double> values, double target_mean, double tol) {
    if (!(target_mean >= 1.0)) throw Error(ErrorKind::domain, "target mean interval must be >= 1");
    if (!(tol > 0.0)) throw Error(ErrorKind::domain, "tolerance must be positive");
    if (values.size() < 2) throw Error(ErrorKind::empty_series, "series too short for interval analysis");

    // Largest usable threshold sits just below the second-largest value.
    std::vector<double> top(values.begin(), values.end());
    std::nth_element(top.begin(), top.begin() + 1, top.end(), std::greater<>());
    const double second = top[1];
    const double vmin = *std::min_element(values.begin(), values.end());

    double lo = vmin > 0.0 ? std::nextafter(vmin, 0.0) : 0.0;
    double hi = std::nextafter(second, -std::numeric_limits<double>::infinity());
    if (hi < lo) hi = lo;
    const double mean_lo = mean_interval_at(values, lo);
    const double mean_hi = mean_interval_at(values, hi);
    if (target_mean > mean_hi + tol) {
        throw Error(ErrorKind::unreachable_target, "target <tau> = " + std::to_string(target_mean) +
                                                       " exceeds the largest reachable " + std::to_string(mean_hi));
    }

    ThresholdSearch best{lo, mean_lo};
    auto consider = [&](double q, double m) {
        if (std::abs(m - target_mean) < std::abs(best.achieved_mean - target_mean)) best = {q, m};
    };
    consider(hi, mean_hi);
    if (std::abs(mean_lo - target_mean) <= tol) return {lo, mean_lo};

    for (int iter = 0; iter < 200 && hi > lo; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double m = mean_interval_at(values, mid);
        consider(mid, m);
        if (std::abs(m - target_mean) <= tol) return {mid, m};
        if (m < target_mean) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return best;
}

ThresholdSearch threshold_for_mean(const NormVolSeries& v, double target_mean, double tol) {
    return threshold_for_mean(std::span<const double>(v.values), target_mean, tol);
}

}  // namespace retint
