#pragma once

#include "retint/ingest.hpp"
#include "retint/semodel.hpp"
#include "retint/volatility.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace retint {

enum class SynthKind { iid_gaussian_abs, shuffled_from_file, se_intervals };

[[nodiscard]] std::string_view to_string(SynthKind kind) noexcept;
[[nodiscard]] SynthKind parse_synth_kind(std::string_view text);

struct SynthSpec {
    SynthKind kind = SynthKind::iid_gaussian_abs;
    std::size_t n = 140000;
    std::uint64_t seed = 1;
    /// se_intervals: stretching exponent of the event gaps and their mean length.
    double se_gamma = 0.38;
    double se_mean_interval = 10.0;
    /// shuffled_from_file: the series to permute.
    std::string source_path;
};

/// |N(0,1)| draws divided by their population standard deviation. Labels follow a
/// 240-slot synthetic day.
[[nodiscard]] NormVolSeries gen_iid_volatility(std::size_t n, std::uint64_t seed);

/// Uniform random permutation of the values; day/slot labels stay in place.
[[nodiscard]] NormVolSeries shuffle_series(const NormVolSeries& v, std::uint64_t seed);

/// Memory-bearing series: events (|z| above the level exceeded with probability
/// 1/mean_interval) separated by stretched-exponential gaps, quiet |z| elsewhere.
[[nodiscard]] NormVolSeries gen_se_interval_volatility(std::size_t n, double gamma, double mean_interval,
                                                       std::uint64_t seed);

/// Builds the series described by `spec`; shuffled_from_file reads `source` instead of a path.
[[nodiscard]] NormVolSeries generate(const SynthSpec& spec, const NormVolSeries* source = nullptr);

/// Prices whose absolute log returns reproduce `v` (times `return_scale`) on the calendar.
///
/// Session-opening slots carry no return, so each day holds minutes_per_day - sessions
/// returns; the last day is padded with iid returns of the same scale.
[[nodiscard]] MinuteSeries prices_from_volatility(const NormVolSeries& v, const TradingCalendar& cal,
                                                  std::int64_t first_day, std::uint64_t seed,
                                                  double return_scale = 1e-3);

}  // namespace retint
