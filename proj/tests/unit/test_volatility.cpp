#include <doctest.h>

#include "retint/error.hpp"
#include "retint/volatility.hpp"

#include <cmath>
#include <numeric>
#include <random>

using namespace retint;

namespace {

TradingCalendar small_calendar() {
    // Two sessions of three minutes each: slots 0-2 and 3-5, slot 3 opens the second.
    return TradingCalendar({{600, 603}, {660, 663}});
}

MinuteSeries series_of(const TradingCalendar& cal, const std::vector<std::vector<double>>& days) {
    MinuteSeries ms;
    ms.slots_per_day = cal.minutes_per_day();
    for (std::size_t d = 0; d < days.size(); ++d) {
        ms.days.push_back(static_cast<std::int64_t>(12000 + d));
        for (double p : days[d]) {
            ms.price.push_back(p > 0.0 ? p : 0.0);
            ms.present.push_back(p > 0.0 ? 1 : 0);
        }
    }
    return ms;
}

VolSeries raw(std::vector<double> values, std::vector<std::int32_t> day, std::vector<std::int32_t> slot, int spd) {
    VolSeries vs;
    vs.values = std::move(values);
    vs.day = std::move(day);
    vs.slot = std::move(slot);
    vs.slots_per_day = spd;
    return vs;
}

}  // namespace

TEST_CASE("returns of constant and rising prices") {
    const TradingCalendar cal({{600, 602}});
    auto vs = compute_volatility(series_of(cal, {{100, 100}}), cal);
    REQUIRE(vs.size() == 1);
    CHECK(vs.values[0] == 0.0);
    vs = compute_volatility(series_of(cal, {{100, 101}}), cal);
    CHECK(vs.values[0] == doctest::Approx(0.0099503).epsilon(1e-6));
    CHECK(vs.values[0] == std::abs(std::log(101.0) - std::log(100.0)));
}

TEST_CASE("day and lunch boundaries") {
    const auto cal = small_calendar();
    const auto ms = series_of(cal, {{10, 11, 12, 13, 14, 15}, {16, 17, 18, 19, 20, 21}});
    const auto dropped = compute_volatility(ms, cal, true);
    CHECK(dropped.size() == 8);  // 2 per session
    for (auto s : dropped.slot) CHECK_FALSE(cal.opens_session(s));
    const auto kept = compute_volatility(ms, cal, false);
    CHECK(kept.size() == 11);
    CHECK(kept.values[5] == doctest::Approx(std::log(16.0 / 15.0)));
}

TEST_CASE("missing slots are bridged inside a session") {
    const auto cal = small_calendar();
    const auto vs = compute_volatility(series_of(cal, {{10, -1, 12, 13, -1, 15}}), cal);
    REQUIRE(vs.size() == 2);
    CHECK(vs.values[0] == doctest::Approx(std::log(1.2)));
    CHECK(vs.slot[0] == 2);
    CHECK(vs.values[1] == doctest::Approx(std::log(15.0 / 13.0)));
}

TEST_CASE("fewer than two prices") {
    const TradingCalendar cal({{600, 602}});
    try {
        (void)compute_volatility(series_of(cal, {{100, -1}}), cal);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::empty_series);
    }
}

TEST_CASE("intraday pattern averages") {
    SUBCASE("single day identity") {
        const auto p = intraday_pattern(raw({0.1, 0.2, 0.4}, {0, 0, 0}, {0, 1, 2}, 3));
        CHECK(p.level == std::vector<double>{0.1, 0.2, 0.4});
        CHECK(p.days == 1);
    }
    SUBCASE("two days") {
        const auto p = intraday_pattern(raw({0.1, 0.3}, {0, 1}, {1, 1}, 3));
        CHECK(p.level[1] == doctest::Approx(0.2));
        CHECK(p.day_count[1] == 2);
        CHECK_FALSE(p.valid(0));
    }
    SUBCASE("zero day plus normal day") {
        const auto p = intraday_pattern(raw({0.0, 0.0, 0.6, 0.8}, {0, 0, 1, 1}, {0, 1, 0, 1}, 2));
        CHECK(p.level[0] == doctest::Approx(0.3));
        CHECK(p.level[1] == doctest::Approx(0.4));
    }
}

TEST_CASE("deseasonalize") {
    SUBCASE("arithmetic") {
        IntradayPattern p{{0.2}, {1}, 1};
        const auto out = deseasonalize(raw({0.3}, {0}, {0}, 1), p);
        CHECK(out.values[0] == doctest::Approx(1.5));
        CHECK(out.stage == VolStage::deseasonalized);
    }
    SUBCASE("zero over zero") {
        IntradayPattern p{{0.0}, {1}, 1};
        CHECK(deseasonalize(raw({0.0}, {0}, {0}, 1), p).values[0] == 0.0);
    }
    SUBCASE("zero level with activity") {
        IntradayPattern p{{0.0}, {1}, 1};
        try {
            (void)deseasonalize(raw({0.1}, {0}, {0}, 1), p);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::degenerate);
        }
    }
    SUBCASE("daily repetition gives ones") {
        std::vector<double> v;
        std::vector<std::int32_t> d, s;
        for (int day = 0; day < 4; ++day) {
            for (int slot = 0; slot < 5; ++slot) {
                v.push_back(0.1 + 0.05 * slot);
                d.push_back(day);
                s.push_back(slot);
            }
        }
        const auto vs = raw(v, d, s, 5);
        for (double x : deseasonalize(vs, intraday_pattern(vs)).values) CHECK(x == doctest::Approx(1.0));
    }
}

TEST_CASE("pattern partitions the total") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v;
    std::vector<std::int32_t> d, s;
    const int days = 7, slots = 11;
    for (int day = 0; day < days; ++day) {
        for (int slot = 0; slot < slots; ++slot) {
            v.push_back(u(rng));
            d.push_back(day);
            s.push_back(slot);
        }
    }
    const auto p = intraday_pattern(raw(v, d, s, slots));
    const double mean_level = std::accumulate(p.level.begin(), p.level.end(), 0.0) / slots;
    CHECK(mean_level * slots * days == doctest::Approx(std::accumulate(v.begin(), v.end(), 0.0)).epsilon(1e-12));
}

TEST_CASE("normalize") {
    auto vs = raw({0.0, 2.0}, {0, 0}, {0, 1}, 2);
    vs.stage = VolStage::deseasonalized;
    auto n = normalize(vs);
    CHECK(n.values == std::vector<double>{0.0, 2.0});
    CHECK(n.scale == 1.0);

    std::mt19937_64 rng(9);
    std::exponential_distribution<double> e(1.0);
    std::vector<double> v(5000);
    for (auto& x : v) x = e(rng);
    auto big = raw(v, std::vector<std::int32_t>(v.size(), 0), std::vector<std::int32_t>(v.size(), 0), 1);
    n = normalize(big);
    CHECK(population_sd(n.values) == doctest::Approx(1.0).epsilon(1e-9));
    for (auto& x : big.values) x *= 37.5;
    const auto scaled = normalize(big);
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(scaled.values[i] == doctest::Approx(n.values[i]).epsilon(1e-12));

    auto flat = raw({1.0, 1.0}, {0, 0}, {0, 1}, 2);
    CHECK_THROWS_AS((void)normalize(flat), Error);
}
