#include "retint/volatility.hpp"

#include "retint/error.hpp"

#include <cmath>
#include <string>

namespace retint {

VolSeries compute_volatility(const MinuteSeries& ms, const TradingCalendar& cal, bool drop_overnight) {
    if (ms.slots_per_day != cal.minutes_per_day()) {
        throw Error(ErrorKind::domain, "minute series and calendar disagree on minutes per day");
    }
    VolSeries out;
    out.slots_per_day = ms.slots_per_day;
    out.stage = VolStage::raw;

    bool have_previous = false;
    double previous_log = 0.0;
    std::size_t previous_day = 0;
    int previous_slot = 0;
    std::size_t usable = 0;
    for (std::size_t d = 0; d < ms.days.size(); ++d) {
        for (int s = 0; s < ms.slots_per_day; ++s) {
            if (!ms.has(d, s)) continue;
            ++usable;
            const double log_price = std::log(ms.at(d, s));
            if (have_previous) {
                bool crosses_gap = previous_day != d;
                if (!crosses_gap) {
                    // A session open between the two slots means a break was spanned.
                    for (int k = previous_slot + 1; k <= s; ++k) {
                        if (cal.opens_session(k)) {
                            crosses_gap = true;
                            break;
                        }
                    }
                }
                if (!(drop_overnight && crosses_gap)) {
                    out.values.push_back(std::abs(log_price - previous_log));
                    out.day.push_back(static_cast<std::int32_t>(d));
                    out.slot.push_back(s);
                }
            }
            have_previous = true;
            previous_log = log_price;
            previous_day = d;
            previous_slot = s;
        }
    }
    if (usable < 2 || out.values.empty()) {
        throw Error(ErrorKind::empty_series, "need at least two usable consecutive prices to form a return");
    }
    return out;
}

IntradayPattern intraday_pattern(const VolSeries& vs) {
    if (vs.stage != VolStage::raw) throw Error(ErrorKind::domain, "intraday pattern needs a raw volatility series");
    const auto slots = static_cast<std::size_t>(vs.slots_per_day);
    IntradayPattern pattern;
    pattern.level.assign(slots, 0.0);
    pattern.day_count.assign(slots, 0);
    std::int32_t last_day = -1;
    for (std::size_t t = 0; t < vs.size(); ++t) {
        const auto s = static_cast<std::size_t>(vs.slot[t]);
        if (s >= slots) throw Error(ErrorKind::domain, "volatility slot outside the calendar range");
        pattern.level[s] += vs.values[t];
        ++pattern.day_count[s];
        if (vs.day[t] != last_day) {
            ++pattern.days;
            last_day = vs.day[t];
        }
    }
    for (std::size_t s = 0; s < slots; ++s) {
        if (pattern.day_count[s] > 0) pattern.level[s] /= static_cast<double>(pattern.day_count[s]);
    }
    return pattern;
}

VolSeries deseasonalize(const VolSeries& vs, const IntradayPattern& pattern) {
    if (pattern.level.size() != static_cast<std::size_t>(vs.slots_per_day)) {
        throw Error(ErrorKind::domain, "intraday pattern length does not match the series calendar");
    }
    VolSeries out = vs;
    out.stage = VolStage::deseasonalized;
    for (std::size_t t = 0; t < out.size(); ++t) {
        const auto s = static_cast<std::size_t>(vs.slot[t]);
        if (!pattern.valid(s)) {
            throw Error(ErrorKind::degenerate, "slot " + std::to_string(s) + " has no pattern estimate");
        }
        const double level = pattern.level[s];
        if (level == 0.0) {
            if (vs.values[t] != 0.0) {
                throw Error(ErrorKind::degenerate,
                            "intraday pattern is zero at slot " + std::to_string(s) + " but volatility is not");
            }
            out.values[t] = 0.0;
        } else {
            out.values[t] = vs.values[t] / level;
        }
    }
    return out;
}

double population_sd(const std::vector<double>& values) {
    if (values.empty()) return 0.0;
    const auto n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / n);
}

NormVolSeries normalize(const VolSeries& vs) {
    const double sd = population_sd(vs.values);
    if (!(sd > 0.0)) throw Error(ErrorKind::degenerate, "volatility has zero variance; cannot normalize");
    NormVolSeries out;
    out.values.reserve(vs.size());
    for (double v : vs.values) out.values.push_back(v / sd);
    out.day = vs.day;
    out.slot = vs.slot;
    out.slots_per_day = vs.slots_per_day;
    out.scale = sd;
    return out;
}

}  // namespace retint
