#pragma once

#include "retint/ingest.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace retint {

enum class VolStage { raw, deseasonalized };

/// Absolute one-minute log returns, labelled with day ordinal and minute-of-day slot.
struct VolSeries {
    std::vector<double> values;
    std::vector<std::int32_t> day;
    std::vector<std::int32_t> slot;
    int slots_per_day = 0;
    VolStage stage = VolStage::raw;

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
};

/// Average volatility per minute-of-day slot.
struct IntradayPattern {
    std::vector<double> level;            ///< A(s)
    std::vector<std::size_t> day_count;   ///< days contributing to slot s
    std::size_t days = 0;                 ///< N

    [[nodiscard]] bool valid(std::size_t slot) const { return day_count.at(slot) > 0; }
};

/// Deseasonalized volatility scaled to unit (population) standard deviation.
struct NormVolSeries {
    std::vector<double> values;
    std::vector<std::int32_t> day;
    std::vector<std::int32_t> slot;
    int slots_per_day = 0;
    double scale = 1.0;  ///< standard deviation divided out

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
};

/// R(t) = |ln Y(t) - ln Y(t-1)| between consecutive present slots.
///
/// With `drop_overnight`, returns whose previous price lies on another day or before a
/// session break are not emitted.
[[nodiscard]] VolSeries compute_volatility(const MinuteSeries& ms, const TradingCalendar& cal,
                                           bool drop_overnight = true);

[[nodiscard]] IntradayPattern intraday_pattern(const VolSeries& vs);

/// R'(t) = R(t) / A(s(t)); a zero pattern level is allowed only where R is zero too.
[[nodiscard]] VolSeries deseasonalize(const VolSeries& vs, const IntradayPattern& pattern);

/// Divides by the population standard deviation sqrt(<R'^2> - <R'>^2).
[[nodiscard]] NormVolSeries normalize(const VolSeries& vs);

/// Population standard deviation (divisor n), two-pass.
[[nodiscard]] double population_sd(const std::vector<double>& values);

}  // namespace retint
