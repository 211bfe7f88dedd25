#pragma once

#include "retint/intervals.hpp"
#include "retint/semodel.hpp"
#include "retint/volatility.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace retint {

/// mu_m = <(tau / <tau>)^m>^(1/m).
[[nodiscard]] double empirical_moment(const IntervalSample& s, double m);

/// mu_{m,n} = <tau^m>^(1/m) / <tau^n>^(1/n), on raw intervals.
[[nodiscard]] double ess_mu(const IntervalSample& s, double m, double n);

/// <tau^m>^(1/m) on raw intervals.
[[nodiscard]] double root_moment(std::span<const std::int64_t> intervals, double m);

struct MomentPoint {
    double threshold = 0.0;
    double mean_interval = 0.0;
    double mu = 0.0;
    std::size_t count = 0;
};

/// mu_m against <tau> over a threshold grid; <tau> strictly increases along `points`.
struct MomentCurve {
    double m = 1.0;
    std::vector<MomentPoint> points;
    std::vector<std::string> notes;  ///< grid points that were dropped, and why
};

/// Default grid: q = 1.0, 1.1, ..., 5.0.
[[nodiscard]] std::vector<double> default_q_grid();

[[nodiscard]] MomentCurve moment_curve(const NormVolSeries& v, double m, std::span<const double> q_grid);
[[nodiscard]] MomentCurve moment_curve(std::span<const double> values, double m, std::span<const double> q_grid);

/// Closed <tau> range used for power-law regressions.
struct Region {
    double lo = 10.0;
    double hi = 100.0;

    [[nodiscard]] bool contains(double v) const noexcept { return v >= lo && v <= hi; }
};

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    std::size_t points = 0;
};

/// Unweighted least squares of y on x (needs >= 3 points).
[[nodiscard]] LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// One row of the alpha(m) spectrum.
struct AlphaRow {
    double m = 1.0;
    LineFit fit;
};

/// alpha in mu_m ~ <tau>^alpha over curve points inside `region`.
[[nodiscard]] LineFit fit_alpha(const MomentCurve& curve, Region region = {});

struct EssReport {
    double m = 1.0;
    double n = 1.0;
    double xi = 0.0;           ///< slope of log<tau^m> against log<tau^n>
    double xi_stderr = 0.0;
    double alpha = 0.0;        ///< alpha(m) = xi(m,1)/m - 1
    double alpha_stderr = 0.0;
    double alpha_mn = 0.0;     ///< slope of log mu_{m,n} against log <tau^n>^(1/n)
    double identity_gap = 0.0; ///< |(alpha_mn + 1)/n - xi/m|
    Region region;
    std::size_t points = 0;
};

[[nodiscard]] EssReport ess_xi(const NormVolSeries& v, double m, double n, std::span<const double> q_grid,
                               Region region = {});
[[nodiscard]] EssReport ess_xi(std::span<const double> values, double m, double n, std::span<const double> q_grid,
                               Region region = {});

struct OrderCurve {
    double target_mean = 0.0;
    double threshold = 0.0;
    double achieved_mean = 0.0;
    std::vector<double> orders;
    std::vector<double> mu;                   ///< empirical mu_m per order
    std::optional<SEModel> fitted;            ///< MLE fit of the scaled intervals
    std::vector<double> analytic_mu;          ///< analytic_moment of `fitted`, empty if fit failed
};

/// mu_m against m at fixed <tau> targets, with analytic companions from fitted models.
[[nodiscard]] std::vector<OrderCurve> moment_vs_order(const NormVolSeries& v, std::span<const double> mean_targets,
                                                      std::span<const double> m_grid, double tol = 0.5);
[[nodiscard]] std::vector<OrderCurve> moment_vs_order(std::span<const double> values,
                                                      std::span<const double> mean_targets,
                                                      std::span<const double> m_grid, double tol = 0.5);

}  // namespace retint
