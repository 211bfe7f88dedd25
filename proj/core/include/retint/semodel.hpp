#pragma once

#include "retint/error.hpp"
#include "retint/intervals.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace retint {

/// Stretched exponential density f(x) = c * exp(-a * x^gamma) on x > 0.
///
/// A `constrained` model carries the normalizing c for its (a, gamma); models fitted
/// on binned densities keep a free c and are not probability densities.
struct SEModel {
    double c = 1.0;
    double a = 1.0;
    double gamma = 1.0;
    bool constrained = true;

    /// Model with c chosen so that the density integrates to one.
    [[nodiscard]] static SEModel normalized(double a, double gamma);
    /// Model with a free normalization (binned least-squares fits).
    [[nodiscard]] static SEModel free(double c, double a, double gamma);

    [[nodiscard]] double pdf(double x) const;
    [[nodiscard]] double log_pdf(double x) const;
    /// Same (a, gamma) with c renormalized.
    [[nodiscard]] SEModel as_normalized() const { return normalized(a, gamma); }
};

/// c = gamma * a^(1/gamma) / Gamma(1/gamma).
[[nodiscard]] double normalization_c(double a, double gamma);

/// F(x) = P(1/gamma, a x^gamma), the regularized lower incomplete gamma function.
[[nodiscard]] double se_cdf(const SEModel& model, double x);
/// Inverse of se_cdf for p in [0, 1].
[[nodiscard]] double se_quantile(const SEModel& model, double p);

/// Exact draws X = (G / a)^(1/gamma), G ~ Gamma(1/gamma, 1). Deterministic for a seed.
[[nodiscard]] std::vector<double> se_sample(const SEModel& model, std::size_t n, std::uint64_t seed);

/// Root moment [int x^m f(x) dx]^(1/m) = a^(-1/gamma) [Gamma((m+1)/gamma) / Gamma(1/gamma)]^(1/m).
[[nodiscard]] double analytic_moment(const SEModel& model, double m);

enum class FitMode { mle, lsq };
[[nodiscard]] std::string_view to_string(FitMode mode) noexcept;
[[nodiscard]] FitMode parse_fit_mode(std::string_view text);

/// Bounds of the stretching exponent searched by both fitters.
inline constexpr double kGammaMin = 0.05;
inline constexpr double kGammaMax = 2.0;

/// Thrown when no start converges; carries the best iterate found.
class FitFailureError : public Error {
public:
    FitFailureError(SEModel best, const std::string& what) : Error(ErrorKind::fit_failure, what), best_(best) {}

    [[nodiscard]] const SEModel& best() const noexcept { return best_; }

private:
    SEModel best_;
};

/// Maximum-likelihood fit with c tied to (a, gamma). Needs >= 50 positive values.
///
/// For fixed gamma the likelihood is maximized by a = n / (gamma * sum x^gamma), so the
/// search runs over gamma alone, started from the brackets around 0.3, 0.6 and 1.0.
[[nodiscard]] SEModel fit_mle(std::span<const double> sample);

struct LsqFit {
    SEModel model;
    double residual = 0.0;    ///< sum of squared log residuals
    bool at_bound = false;    ///< gamma ended on a search bound
};

/// Least squares of log density against log(c exp(-a x^gamma)) with free c.
[[nodiscard]] LsqFit fit_lsq_detailed(const PdfTable& pdf);
[[nodiscard]] SEModel fit_lsq(const PdfTable& pdf);

/// Outcome of fitting and testing one interval sample.
struct FitReport {
    double threshold = 0.0;
    SEModel model;
    FitMode mode = FitMode::mle;
    std::size_t n = 0;
    double ks = 0.0;
    double p = 0.0;
    std::size_t n_boot = 0;
    std::size_t dropped = 0;  ///< replicates whose refit failed
    std::uint64_t seed = 0;
    bool refit = false;
};

}  // namespace retint
