#include <doctest.h>

#include "retint/error.hpp"
#include "retint/ingest.hpp"

#include <algorithm>
#include <sstream>

using namespace retint;

namespace {

std::int64_t utc(int y, unsigned mo, unsigned d, int h, int mi, int s) {
    return days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + s;
}

TickParseResult parse(const std::string& text, int offset = 0) {
    std::istringstream in(text);
    return parse_ticks(in, TickFormat{offset});
}

}  // namespace

TEST_CASE("parse_ticks reads an ISO line") {
    const auto r = parse("timestamp,price\n2004-01-05T09:30:07,1500.25\n");
    REQUIRE(r.ticks.size() == 1);
    CHECK(r.skipped == 0);
    CHECK(r.ticks[0].timestamp == utc(2004, 1, 5, 9, 30, 7));
    CHECK(r.ticks[0].price == 1500.25);
}

TEST_CASE("parse_ticks on an empty stream") {
    const auto r = parse("");
    CHECK(r.ticks.empty());
    CHECK(r.skipped == 0);
}

TEST_CASE("a malformed line is skipped and counted") {
    std::string text = "timestamp,price\n";
    for (int i = 0; i < 10; ++i) {
        text += "2004-01-05T09:" + std::to_string(31 + i) + ":00," + std::to_string(1500 + i) + "\n";
        if (i == 4) text += "x,y\n";
    }
    const auto r = parse(text);
    CHECK(r.ticks.size() == 10);
    CHECK(r.skipped == 1);
    CHECK(r.ticks[5].price == 1505.0);
}

TEST_CASE("mostly malformed input is a format error") {
    try {
        (void)parse("timestamp,price\nx,y\na,b\n2004-01-05T09:31:00,1\n");
        FAIL("expected a format error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::format);
    }
}

TEST_CASE("non-positive prices are malformed") {
    const auto r = parse("timestamp,price\n1000,0\n1060,5\n1120,6\n");
    CHECK(r.ticks.size() == 2);
    CHECK(r.skipped == 1);
}

TEST_CASE("timestamp forms") {
    std::int64_t t = 0;
    CHECK(parse_timestamp("1073295007", 0, t));
    CHECK(t == 1073295007);
    CHECK(parse_timestamp("2004-01-05T09:30:07Z", 480, t));
    CHECK(t == utc(2004, 1, 5, 9, 30, 7));
    CHECK(parse_timestamp("2004-01-05T09:30:07+08:00", 0, t));
    CHECK(t == utc(2004, 1, 5, 1, 30, 7));
    CHECK(parse_timestamp("2004-01-05T09:30:07", 480, t));
    CHECK(t == utc(2004, 1, 5, 1, 30, 7));
    CHECK_FALSE(parse_timestamp("2004-13-05T09:30:07", 0, t));
    CHECK_FALSE(parse_timestamp("yesterday", 0, t));
    CHECK(format_date(days_from_civil(2004, 2, 29)) == "2004-02-29");
    CHECK(days_from_civil(1970, 1, 1) == 0);
}

TEST_CASE("default calendar layout") {
    const auto cal = TradingCalendar::chinese_default();
    CHECK(cal.minutes_per_day() == 240);
    CHECK(cal.mark_minute(0) == 9 * 60 + 31);
    CHECK(cal.mark_minute(119) == 11 * 60 + 30);
    CHECK(cal.mark_minute(120) == 13 * 60 + 1);
    CHECK(cal.mark_minute(239) == 15 * 60);
    CHECK(cal.opens_session(0));
    CHECK(cal.opens_session(120));
    CHECK_FALSE(cal.opens_session(1));
}

TEST_CASE("calendar from JSON") {
    const auto cal = TradingCalendar::from_json_text(
        R"({"sessions": [["10:00","10:05"]], "range": {"from": "2004-01-05", "to": "2004-01-11"}})");
    CHECK(cal.minutes_per_day() == 5);
    CHECK(cal.days().size() == 5);  // weekdays only by default
    CHECK_THROWS_AS((void)TradingCalendar::from_json_text(R"({"sessions": [["10:00","09:00"]]})"), Error);
    CHECK_THROWS_AS((void)TradingCalendar::from_json_text(R"({"sessions": [["09:00","10:00"],["09:30","11:00"]]})"),
                    Error);
}

TEST_CASE("nearest tick wins; ties go to the earlier tick") {
    const auto cal = TradingCalendar::chinese_default();
    const auto day = days_from_civil(2004, 1, 5);
    const std::int64_t mark = cal.mark_time(day, 0);  // 09:31:00
    SUBCASE("2 s beats 3 s") {
        const std::vector<TickRecord> ticks{{mark - 2, 10.0}, {mark + 3, 11.0}};
        const auto ms = sample_minutely(ticks, cal);
        REQUIRE(ms.days.size() == 1);
        CHECK(ms.has(0, 0));
        CHECK(ms.at(0, 0) == 10.0);
    }
    SUBCASE("tie") {
        const std::vector<TickRecord> ticks{{mark - 5, 10.0}, {mark + 5, 11.0}};
        CHECK(sample_minutely(ticks, cal).at(0, 0) == 10.0);
    }
    SUBCASE("exact hit") {
        const std::vector<TickRecord> ticks{{mark - 20, 9.0}, {mark, 12.0}, {mark + 1, 13.0}};
        CHECK(sample_minutely(ticks, cal).at(0, 0) == 12.0);
    }
    SUBCASE("outside the window the slot is missing") {
        const std::vector<TickRecord> ticks{{mark - 31, 10.0}, {mark + 31, 11.0}};
        const auto ms = sample_minutely(ticks, cal);
        CHECK_FALSE(ms.has(0, 0));
        CHECK(ms.has(0, 1));  // mark + 31 is 29 s from 09:32
        CHECK(ms.at(0, 1) == 11.0);
    }
}

TEST_CASE("no in-session ticks is an empty-series error") {
    const auto cal = TradingCalendar::chinese_default();
    const auto day = days_from_civil(2004, 1, 5);
    const std::vector<TickRecord> ticks{{day * 86400 + 3 * 3600, 10.0}};
    try {
        (void)sample_minutely(ticks, cal);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::empty_series);
    }
}

TEST_CASE("slot count, idempotence and no interpolation") {
    const auto cal = TradingCalendar::chinese_default();
    std::vector<TickRecord> ticks;
    std::vector<double> prices;
    for (int d = 0; d < 3; ++d) {
        const auto day = days_from_civil(2004, 1, 5 + static_cast<unsigned>(d));
        for (int s = 0; s < 240; ++s) {
            for (int k = 0; k < 3; ++k) {
                const double p = 1000.0 + d * 300 + s + k * 0.1;
                ticks.push_back({cal.mark_time(day, s) - 20 + 15 * k, p});
                prices.push_back(p);
            }
        }
    }
    const auto ms = sample_minutely(ticks, cal);
    CHECK(ms.size() == 3u * 240u);
    CHECK(ms.present_count() == ms.size());
    for (std::size_t i = 0; i < ms.size(); ++i) {
        CHECK(std::find(prices.begin(), prices.end(), ms.price[i]) != prices.end());
    }
    const auto again = sample_minutely(to_ticks(ms, cal), cal);
    CHECK(again.price == ms.price);
    CHECK(again.present == ms.present);
    CHECK(again.days == ms.days);
}

TEST_CASE("minute CSV round-trips through the parser") {
    const auto cal = TradingCalendar(std::vector<Session>{{600, 603}}, {}, 480);
    const auto day = days_from_civil(2004, 1, 5);
    const std::vector<TickRecord> ticks{{cal.mark_time(day, 0), 5.0}, {cal.mark_time(day, 2), 6.5}};
    const auto ms = sample_minutely(ticks, cal);
    std::ostringstream out;
    write_minute_csv(out, ms, cal);
    std::istringstream in(out.str());
    const auto parsed = parse_ticks(in, TickFormat{480});
    CHECK(parsed.ticks == ticks);
}
