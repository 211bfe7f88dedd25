#include "retint/synth.hpp"

#include "retint/csv_io.hpp"
#include "retint/error.hpp"
#include "retint/seeding.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

namespace retint {

namespace {

void label_synthetic(NormVolSeries& v) {
    constexpr int kSlots = 240;
    v.slots_per_day = kSlots;
    v.day.resize(v.values.size());
    v.slot.resize(v.values.size());
    for (std::size_t i = 0; i < v.values.size(); ++i) {
        v.day[i] = static_cast<std::int32_t>(i / kSlots);
        v.slot[i] = static_cast<std::int32_t>(i % kSlots);
    }
}

NormVolSeries finish(std::vector<double> raw) {
    const double sd = population_sd(raw);
    if (!(sd > 0.0)) throw Error(ErrorKind::degenerate, "synthetic series has zero variance");
    NormVolSeries v;
    for (double& x : raw) x /= sd;
    v.values = std::move(raw);
    v.scale = sd;
    label_synthetic(v);
    return v;
}

bool is_weekday(std::int64_t epoch_day) {
    const std::chrono::weekday wd{std::chrono::sys_days{std::chrono::days{epoch_day}}};
    return wd.iso_encoding() <= 5;
}

}  // namespace

std::string_view to_string(SynthKind kind) noexcept {
    switch (kind) {
        case SynthKind::iid_gaussian_abs: return "iid_gaussian_abs";
        case SynthKind::shuffled_from_file: return "shuffled_from_file";
        case SynthKind::se_intervals: return "se_intervals";
    }
    return "unknown";
}

SynthKind parse_synth_kind(std::string_view text) {
    if (text == "iid_gaussian_abs") return SynthKind::iid_gaussian_abs;
    if (text == "shuffled_from_file") return SynthKind::shuffled_from_file;
    if (text == "se_intervals") return SynthKind::se_intervals;
    throw Error(ErrorKind::config, "unknown synth kind '" + std::string(text) + "'");
}

NormVolSeries gen_iid_volatility(std::size_t n, std::uint64_t seed) {
    if (n < 100) throw Error(ErrorKind::domain, "synthetic volatility needs n >= 100");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::vector<double> raw(n);
    for (auto& x : raw) x = std::abs(normal(rng));
    return finish(std::move(raw));
}

NormVolSeries shuffle_series(const NormVolSeries& v, std::uint64_t seed) {
    if (v.values.empty()) throw Error(ErrorKind::empty_series, "cannot shuffle an empty series");
    NormVolSeries out = v;
    std::mt19937_64 rng(seed);
    // Explicit Fisher-Yates: std::shuffle's draw pattern is implementation-defined.
    for (std::size_t i = out.values.size() - 1; i > 0; --i) {
        const std::size_t j = std::uniform_int_distribution<std::size_t>(0, i)(rng);
        std::swap(out.values[i], out.values[j]);
    }
    return out;
}

NormVolSeries gen_se_interval_volatility(std::size_t n, double gamma, double mean_interval, std::uint64_t seed) {
    if (n < 100) throw Error(ErrorKind::domain, "synthetic volatility needs n >= 100");
    if (!(mean_interval > 1.0)) throw Error(ErrorKind::domain, "event mean interval must exceed 1");
    // Scale so the gap distribution has unit mean before stretching by mean_interval.
    const double a = std::pow(std::exp(boost::math::lgamma(2.0 / gamma) - boost::math::lgamma(1.0 / gamma)), gamma);
    const SEModel gaps = SEModel::normalized(a, gamma);

    std::mt19937_64 rng(seed);
    std::gamma_distribution<double> gamma_draw(1.0 / gamma, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const double p_event = 1.0 / mean_interval;
    const double root2 = std::sqrt(2.0);

    std::vector<double> raw(n);
    std::size_t next_event = 0;
    for (std::size_t t = 0; t < n; ++t) {
        const double u = 1.0 - uniform(rng);  // (0, 1]
        if (t == next_event) {
            raw[t] = root2 * boost::math::erfc_inv(u * p_event);
            const double x = std::pow(gamma_draw(rng) / gaps.a, 1.0 / gaps.gamma);
            next_event = t + std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(x * mean_interval)));
        } else {
            raw[t] = root2 * boost::math::erfc_inv(std::min(2.0 - 1e-16, p_event + u * (1.0 - p_event)));
        }
    }
    return finish(std::move(raw));
}

NormVolSeries generate(const SynthSpec& spec, const NormVolSeries* source) {
    switch (spec.kind) {
        case SynthKind::iid_gaussian_abs: return gen_iid_volatility(spec.n, spec.seed);
        case SynthKind::se_intervals:
            return gen_se_interval_volatility(spec.n, spec.se_gamma, spec.se_mean_interval, spec.seed);
        case SynthKind::shuffled_from_file: {
            if (source != nullptr) return shuffle_series(*source, spec.seed);
            if (spec.source_path.empty()) throw Error(ErrorKind::config, "shuffled_from_file needs a source path");
            return shuffle_series(read_volatility_csv_file(spec.source_path), spec.seed);
        }
    }
    throw Error(ErrorKind::config, "unknown synth kind");
}

MinuteSeries prices_from_volatility(const NormVolSeries& v, const TradingCalendar& cal, std::int64_t first_day,
                                    std::uint64_t seed, double return_scale) {
    if (v.values.empty()) throw Error(ErrorKind::empty_series, "cannot build prices from an empty series");
    const int slots = cal.minutes_per_day();
    int returns_per_day = 0;
    for (int s = 0; s < slots; ++s) returns_per_day += cal.opens_session(s) ? 0 : 1;
    if (returns_per_day == 0) throw Error(ErrorKind::config, "calendar sessions hold no intraday returns");
    const std::size_t day_count =
        (v.values.size() + static_cast<std::size_t>(returns_per_day) - 1) / static_cast<std::size_t>(returns_per_day);

    std::vector<std::int64_t> days;
    if (!cal.days().empty()) {
        if (cal.days().size() < day_count) {
            throw Error(ErrorKind::config, "calendar lists fewer days than the synthetic series needs");
        }
        days.assign(cal.days().begin(), cal.days().begin() + static_cast<std::ptrdiff_t>(day_count));
    } else {
        for (std::int64_t d = first_day; days.size() < day_count; ++d) {
            if (is_weekday(d)) days.push_back(d);
        }
    }

    std::mt19937_64 sign_rng(derive_seed(seed, "synth.sign"));
    std::mt19937_64 pad_rng(derive_seed(seed, "synth.pad"));
    std::bernoulli_distribution coin(0.5);
    std::normal_distribution<double> normal;
    const double half_normal_sd = std::sqrt(1.0 - 2.0 / std::acos(-1.0));

    MinuteSeries ms;
    ms.slots_per_day = slots;
    ms.days = days;
    ms.price.reserve(day_count * static_cast<std::size_t>(slots));
    ms.present.assign(day_count * static_cast<std::size_t>(slots), 1);
    double log_price = std::log(1000.0);
    std::size_t next = 0;
    for (std::size_t d = 0; d < day_count; ++d) {
        for (int s = 0; s < slots; ++s) {
            if (!cal.opens_session(s)) {
                const double r = next < v.values.size() ? v.values[next] : std::abs(normal(pad_rng)) / half_normal_sd;
                ++next;
                log_price += (coin(sign_rng) ? 1.0 : -1.0) * r * return_scale;
            }
            ms.price.push_back(std::exp(log_price));
        }
    }
    return ms;
}

}  // namespace retint
