#include "retint/moments.hpp"

#include "retint/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace retint {

namespace {

struct GridSample {
    double threshold;
    IntervalSample sample;
};

// Interval samples along the grid, keeping only strictly increasing <tau>.
std::vector<GridSample> walk_grid(std::span<const double> values, std::span<const double> q_grid,
                                  std::vector<std::string>* notes) {
    if (q_grid.empty()) throw Error(ErrorKind::domain, "threshold grid is empty");
    std::vector<GridSample> out;
    for (double q : q_grid) {
        try {
            IntervalSample s = extract_intervals(values, q);
            if (!out.empty() && !(s.mean_interval > out.back().sample.mean_interval)) {
                if (notes != nullptr) notes->push_back("q=" + std::to_string(q) + ": <tau> did not increase; dropped");
                continue;
            }
            out.push_back({q, std::move(s)});
        } catch (const InsufficientEventsError& e) {
            if (notes != nullptr) notes->push_back("q=" + std::to_string(q) + ": " + e.what());
        }
    }
    if (out.empty()) {
        throw Error(ErrorKind::insufficient_events, "no threshold in the grid yields at least two exceedances");
    }
    return out;
}

}  // namespace

double root_moment(std::span<const std::int64_t> intervals, double m) {
    if (!(m > 0.0) || !std::isfinite(m)) throw Error(ErrorKind::domain, "moment order must be positive");
    if (intervals.empty()) throw Error(ErrorKind::empty_series, "moment of an empty sample");
    const auto top = static_cast<double>(*std::max_element(intervals.begin(), intervals.end()));
    double acc = 0.0;
    for (auto tau : intervals) acc += std::pow(static_cast<double>(tau) / top, m);
    const double value = top * std::pow(acc / static_cast<double>(intervals.size()), 1.0 / m);
    if (!std::isfinite(value) || !(value > 0.0)) {
        // (tau/top)^m underflows for every term but the maximum only once m is enormous.
        const double safe = std::log(std::numeric_limits<double>::max()) / std::log(std::max(2.0, top));
        throw OverflowError(safe, "moment of order " + std::to_string(m) + " is not representable");
    }
    return value;
}

double empirical_moment(const IntervalSample& s, double m) {
    return root_moment(s.intervals, m) / s.mean_interval;
}

double ess_mu(const IntervalSample& s, double m, double n) {
    return root_moment(s.intervals, m) / root_moment(s.intervals, n);
}

std::vector<double> default_q_grid() {
    std::vector<double> grid;
    for (int k = 10; k <= 50; ++k) grid.push_back(k / 10.0);
    return grid;
}

MomentCurve moment_curve(std::span<const double> values, double m, std::span<const double> q_grid) {
    MomentCurve curve;
    curve.m = m;
    for (auto& g : walk_grid(values, q_grid, &curve.notes)) {
        curve.points.push_back({g.threshold, g.sample.mean_interval, empirical_moment(g.sample, m), g.sample.size()});
    }
    return curve;
}

MomentCurve moment_curve(const NormVolSeries& v, double m, std::span<const double> q_grid) {
    return moment_curve(std::span<const double>(v.values), m, q_grid);
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw Error(ErrorKind::domain, "regression inputs differ in length");
    if (x.size() < 3) {
        throw Error(ErrorKind::insufficient_points,
                    "regression needs at least 3 points, got " + std::to_string(x.size()));
    }
    const auto k = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= k;
    my /= k;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw Error(ErrorKind::insufficient_points, "regression abscissae are all equal");
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        ssr += r * r;
    }
    fit.slope_stderr = std::sqrt(ssr / (k - 2.0) / sxx);
    fit.points = x.size();
    return fit;
}

LineFit fit_alpha(const MomentCurve& curve, Region region) {
    std::vector<double> x;
    std::vector<double> y;
    for (const auto& p : curve.points) {
        if (!region.contains(p.mean_interval)) continue;
        x.push_back(std::log(p.mean_interval));
        y.push_back(std::log(p.mu));
    }
    return fit_line(x, y);
}

EssReport ess_xi(std::span<const double> values, double m, double n, std::span<const double> q_grid, Region region) {
    if (!(m > 0.0) || !(n > 0.0)) throw Error(ErrorKind::domain, "ESS orders must be positive");
    std::vector<double> log_m;  // log <tau^m>
    std::vector<double> log_n;  // log <tau^n>
    std::vector<double> log_1;  // log <tau>
    for (const auto& g : walk_grid(values, q_grid, nullptr)) {
        if (!region.contains(g.sample.mean_interval)) continue;
        log_m.push_back(m * std::log(root_moment(g.sample.intervals, m)));
        log_n.push_back(n * std::log(root_moment(g.sample.intervals, n)));
        log_1.push_back(std::log(g.sample.mean_interval));
    }
    EssReport report;
    report.m = m;
    report.n = n;
    report.region = region;
    report.points = log_m.size();

    const LineFit xi = fit_line(log_n, log_m);
    report.xi = xi.slope;
    report.xi_stderr = xi.slope_stderr;

    const LineFit xi1 = fit_line(log_1, log_m);
    report.alpha = xi1.slope / m - 1.0;
    report.alpha_stderr = xi1.slope_stderr / m;

    std::vector<double> x(log_n.size());
    std::vector<double> y(log_n.size());
    for (std::size_t i = 0; i < log_n.size(); ++i) {
        x[i] = log_n[i] / n;
        y[i] = log_m[i] / m - log_n[i] / n;
    }
    report.alpha_mn = fit_line(x, y).slope;
    report.identity_gap = std::abs((report.alpha_mn + 1.0) / n - report.xi / m);
    return report;
}

EssReport ess_xi(const NormVolSeries& v, double m, double n, std::span<const double> q_grid, Region region) {
    return ess_xi(std::span<const double>(v.values), m, n, q_grid, region);
}

std::vector<OrderCurve> moment_vs_order(std::span<const double> values, std::span<const double> mean_targets,
                                        std::span<const double> m_grid, double tol) {
    std::vector<OrderCurve> curves;
    for (double target : mean_targets) {
        const ThresholdSearch found = threshold_for_mean(values, target, tol);
        const IntervalSample s = extract_intervals(values, found.threshold);
        OrderCurve curve;
        curve.target_mean = target;
        curve.threshold = found.threshold;
        curve.achieved_mean = s.mean_interval;
        curve.orders.assign(m_grid.begin(), m_grid.end());
        for (double m : m_grid) curve.mu.push_back(empirical_moment(s, m));
        try {
            const SEModel model = fit_mle(s.scaled());
            curve.fitted = model;
            for (double m : m_grid) curve.analytic_mu.push_back(analytic_moment(model, m));
        } catch (const Error&) {
            curve.fitted.reset();
            curve.analytic_mu.clear();
        }
        curves.push_back(std::move(curve));
    }
    return curves;
}

std::vector<OrderCurve> moment_vs_order(const NormVolSeries& v, std::span<const double> mean_targets,
                                        std::span<const double> m_grid, double tol) {
    return moment_vs_order(std::span<const double>(v.values), mean_targets, m_grid, tol);
}

}  // namespace retint
