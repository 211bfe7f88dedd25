#include "retint/semodel.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <utility>

namespace retint {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorKind::domain, std::string(name) + " must be positive");
}

void require_constrained(const SEModel& model, const char* op) {
    if (!model.constrained) {
        throw Error(ErrorKind::domain, std::string(op) + " needs a normalized model (use as_normalized())");
    }
}

constexpr int kBrentBits = std::numeric_limits<double>::digits / 2;
constexpr std::uintmax_t kBrentMaxIter = 200;

// Brent minimization of f over each bracket; returns the best (argmin, value).
template <typename F>
std::pair<double, double> minimize_over(F f, std::span<const std::pair<double, double>> brackets) {
    std::pair<double, double> best{std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::infinity()};
    for (const auto& [lo, hi] : brackets) {
        std::uintmax_t iters = kBrentMaxIter;
        const auto r = boost::math::tools::brent_find_minima(f, lo, hi, kBrentBits, iters);
        if (std::isfinite(r.second) && r.second < best.second) best = r;
    }
    return best;
}

}  // namespace

double normalization_c(double a, double gamma) {
    require_positive(a, "a");
    require_positive(gamma, "gamma");
    return std::exp(std::log(gamma) + std::log(a) / gamma - boost::math::lgamma(1.0 / gamma));
}

SEModel SEModel::normalized(double a, double gamma) { return {normalization_c(a, gamma), a, gamma, true}; }

SEModel SEModel::free(double c, double a, double gamma) {
    require_positive(c, "c");
    require_positive(a, "a");
    require_positive(gamma, "gamma");
    return {c, a, gamma, false};
}

double SEModel::pdf(double x) const {
    if (x < 0.0) return 0.0;
    return c * std::exp(-a * std::pow(x, gamma));
}

double SEModel::log_pdf(double x) const {
    if (x < 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(c) - a * std::pow(x, gamma);
}

double se_cdf(const SEModel& model, double x) {
    require_constrained(model, "se_cdf");
    if (!(x > 0.0)) return 0.0;
    if (std::isinf(x)) return 1.0;
    return boost::math::gamma_p(1.0 / model.gamma, model.a * std::pow(x, model.gamma));
}

double se_quantile(const SEModel& model, double p) {
    require_constrained(model, "se_quantile");
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::domain, "quantile probability must lie in [0, 1]");
    if (p == 0.0) return 0.0;
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    const double g = boost::math::gamma_p_inv(1.0 / model.gamma, p);
    return std::pow(g / model.a, 1.0 / model.gamma);
}

std::vector<double> se_sample(const SEModel& model, std::size_t n, std::uint64_t seed) {
    require_constrained(model, "se_sample");
    if (n == 0) throw Error(ErrorKind::domain, "sample size must be >= 1");
    std::mt19937_64 rng(seed);
    std::gamma_distribution<double> draw(1.0 / model.gamma, 1.0);
    const double inv_gamma = 1.0 / model.gamma;
    std::vector<double> out(n);
    for (auto& x : out) x = std::pow(draw(rng) / model.a, inv_gamma);
    return out;
}

double analytic_moment(const SEModel& model, double m) {
    require_constrained(model, "analytic_moment");
    require_positive(m, "moment order m");
    const double inv_gamma = 1.0 / model.gamma;
    const double lg1 = boost::math::lgamma(inv_gamma);
    auto log_moment = [&](double order) {
        return -inv_gamma * std::log(model.a) + (boost::math::lgamma((order + 1.0) * inv_gamma) - lg1) / order;
    };
    const double limit = std::log(std::numeric_limits<double>::max());
    const double value = log_moment(m);
    if (!(value < limit)) {
        double lo = 0.0;
        double hi = m;
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (log_moment(mid) < limit) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        throw OverflowError(lo, "moment of order " + std::to_string(m) + " overflows; largest safe order is " +
                                    std::to_string(lo));
    }
    return std::exp(value);
}

std::string_view to_string(FitMode mode) noexcept { return mode == FitMode::mle ? "mle" : "lsq"; }

FitMode parse_fit_mode(std::string_view text) {
    if (text == "mle") return FitMode::mle;
    if (text == "lsq") return FitMode::lsq;
    throw Error(ErrorKind::config, "fit mode must be 'mle' or 'lsq'");
}

SEModel fit_mle(std::span<const double> sample) {
    if (sample.size() < 50) throw Error(ErrorKind::domain, "MLE fit needs at least 50 values");
    std::vector<double> logs;
    logs.reserve(sample.size());
    for (double x : sample) {
        if (!(x > 0.0) || !std::isfinite(x)) throw Error(ErrorKind::domain, "MLE fit needs strictly positive values");
        logs.push_back(std::log(x));
    }
    const auto n = static_cast<double>(sample.size());

    // Profile negative log-likelihood per observation, with a at its optimum for gamma.
    auto profile_a = [&](double gamma) {
        double s = 0.0;
        for (double lx : logs) s += std::exp(gamma * lx);
        return n / (gamma * s);
    };
    auto nll = [&](double gamma) {
        const double a = profile_a(gamma);
        const double v = -(std::log(gamma) + std::log(a) / gamma - boost::math::lgamma(1.0 / gamma)) + 1.0 / gamma;
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };

    constexpr std::array<std::pair<double, double>, 3> brackets{
        {{kGammaMin, 0.45}, {0.45, 0.8}, {0.8, kGammaMax}}};
    const auto [gamma, value] = minimize_over(nll, brackets);
    if (!std::isfinite(value)) {
        throw FitFailureError(SEModel{}, "MLE fit did not converge from any start");
    }
    const double a = profile_a(gamma);
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw FitFailureError(SEModel{std::numeric_limits<double>::quiet_NaN(), a, gamma, true},
                              "MLE fit produced a non-finite scale");
    }
    return SEModel::normalized(a, gamma);
}

LsqFit fit_lsq_detailed(const PdfTable& pdf) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t k = 0; k < pdf.size(); ++k) {
        if (pdf.density[k] > 0.0 && pdf.x[k] > 0.0) {
            xs.push_back(pdf.x[k]);
            ys.push_back(std::log(pdf.density[k]));
        }
    }
    if (xs.size() < 5 || pdf.degenerate) {
        throw FitFailureError(SEModel{}, "least-squares fit needs at least 5 non-empty bins");
    }
    const auto n = static_cast<double>(xs.size());
    double y_mean = 0.0;
    for (double y : ys) y_mean += y;
    y_mean /= n;

    struct Line {
        double log_c;
        double a;
        double ss;
    };
    // For fixed gamma the model is linear in (log c, a) against u = x^gamma.
    auto solve = [&](double gamma) {
        double u_mean = 0.0;
        std::vector<double> u(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) {
            u[i] = std::pow(xs[i], gamma);
            u_mean += u[i];
        }
        u_mean /= n;
        double suu = 0.0;
        double suy = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            suu += (u[i] - u_mean) * (u[i] - u_mean);
            suy += (u[i] - u_mean) * (ys[i] - y_mean);
        }
        const double slope = suy / suu;
        Line line{y_mean - slope * u_mean, -slope, 0.0};
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double r = ys[i] - (line.log_c - line.a * u[i]);
            line.ss += r * r;
        }
        if (!std::isfinite(line.ss)) line.ss = std::numeric_limits<double>::infinity();
        return line;
    };
    auto objective = [&](double gamma) { return solve(gamma).ss; };

    // Coarse log-spaced scan picks the basin, Brent refines it.
    constexpr int kGrid = 48;
    const double step = std::log(kGammaMax / kGammaMin) / (kGrid - 1);
    int best_k = 0;
    double best_ss = std::numeric_limits<double>::infinity();
    for (int k = 0; k < kGrid; ++k) {
        const double ss = objective(kGammaMin * std::exp(step * k));
        if (ss < best_ss) {
            best_ss = ss;
            best_k = k;
        }
    }
    const double lo = kGammaMin * std::exp(step * std::max(0, best_k - 1));
    const double hi = kGammaMin * std::exp(step * std::min(kGrid - 1, best_k + 1));
    const std::array<std::pair<double, double>, 1> bracket{{{lo, hi}}};
    const auto [gamma, ss] = minimize_over(objective, bracket);
    const Line line = solve(gamma);

    const SEModel best{std::exp(line.log_c), line.a, gamma, false};
    if (!std::isfinite(ss) || !(line.a > 1e-12) || !std::isfinite(best.c)) {
        throw FitFailureError(best, "least-squares fit is degenerate (no decay in the binned density)");
    }
    LsqFit fit;
    fit.model = best;
    fit.residual = line.ss;
    const double edge = 1e-6;
    fit.at_bound = gamma < kGammaMin * (1 + edge) || gamma > kGammaMax * (1 - edge);
    return fit;
}

SEModel fit_lsq(const PdfTable& pdf) { return fit_lsq_detailed(pdf).model; }

}  // namespace retint
