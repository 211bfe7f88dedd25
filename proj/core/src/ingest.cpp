#include "retint/ingest.hpp"

#include "retint/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

namespace retint {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
    if (s.empty()) return false;
    if (s.front() == '+') s.remove_prefix(1);
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

bool parse_fixed_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
    if (pos + len > s.size()) return false;
    out = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
        if (s[i] < '0' || s[i] > '9') return false;
        out = out * 10 + (s[i] - '0');
    }
    return true;
}

bool parse_hhmm(std::string_view s, int& minute_of_day) {
    s = trim(s);
    int h = 0;
    int m = 0;
    if (s.size() != 5 || s[2] != ':' || !parse_fixed_int(s, 0, 2, h) || !parse_fixed_int(s, 3, 2, m)) {
        return false;
    }
    if (h > 24 || m > 59 || (h == 24 && m != 0)) return false;
    minute_of_day = h * 60 + m;
    return true;
}

bool parse_date(std::string_view s, std::int64_t& epoch_day) {
    int y = 0;
    int mo = 0;
    int d = 0;
    if (s.size() != 10 || s[4] != '-' || s[7] != '-' || !parse_fixed_int(s, 0, 4, y) ||
        !parse_fixed_int(s, 5, 2, mo) || !parse_fixed_int(s, 8, 2, d)) {
        return false;
    }
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(mo)},
                                          std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return false;
    epoch_day = std::chrono::sys_days{ymd}.time_since_epoch().count();
    return true;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

}  // namespace

std::int64_t days_from_civil(int year, unsigned month, unsigned day) noexcept {
    const std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month}, std::chrono::day{day}};
    return std::chrono::sys_days{ymd}.time_since_epoch().count();
}

std::string format_date(std::int64_t epoch_day) {
    const std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{epoch_day}}};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()));
    return buf;
}

std::string format_timestamp(std::int64_t epoch_seconds, int offset_minutes) {
    const std::int64_t local = epoch_seconds + std::int64_t{offset_minutes} * 60;
    const std::int64_t day = floor_div(local, 86400);
    const std::int64_t sec = local - day * 86400;
    char buf[16];
    std::snprintf(buf, sizeof buf, "T%02d:%02d:%02d", static_cast<int>(sec / 3600), static_cast<int>(sec / 60 % 60),
                  static_cast<int>(sec % 60));
    return format_date(day) + buf;
}

bool parse_timestamp(std::string_view text, int default_offset_minutes, std::int64_t& out) {
    text = trim(text);
    if (text.empty()) return false;

    // Plain epoch seconds, optionally fractional.
    if (text.size() < 10 || text[4] != '-') {
        double seconds = 0.0;
        if (!parse_number(text, seconds) || !std::isfinite(seconds)) return false;
        out = static_cast<std::int64_t>(std::floor(seconds));
        return true;
    }

    std::int64_t epoch_day = 0;
    if (!parse_date(text.substr(0, 10), epoch_day)) return false;
    std::int64_t seconds = 0;
    std::string_view rest = text.substr(10);
    int offset = default_offset_minutes;
    if (!rest.empty()) {
        if (rest.front() != 'T' && rest.front() != ' ') return false;
        rest.remove_prefix(1);
        int h = 0;
        int m = 0;
        int s = 0;
        if (!parse_fixed_int(rest, 0, 2, h) || rest.size() < 5 || rest[2] != ':' || !parse_fixed_int(rest, 3, 2, m)) {
            return false;
        }
        rest.remove_prefix(5);
        if (!rest.empty() && rest.front() == ':') {
            if (!parse_fixed_int(rest, 1, 2, s)) return false;
            rest.remove_prefix(3);
            if (!rest.empty() && rest.front() == '.') {
                rest.remove_prefix(1);
                std::size_t digits = 0;
                while (digits < rest.size() && rest[digits] >= '0' && rest[digits] <= '9') ++digits;
                if (digits == 0) return false;
                rest.remove_prefix(digits);  // sub-second precision is truncated
            }
        }
        if (h > 23 || m > 59 || s > 60) return false;
        seconds = h * 3600 + m * 60 + s;
        if (!rest.empty()) {
            if (rest == "Z") {
                offset = 0;
            } else if (rest.front() == '+' || rest.front() == '-') {
                const int sign = rest.front() == '-' ? -1 : 1;
                rest.remove_prefix(1);
                int oh = 0;
                int om = 0;
                if (rest.size() == 5 && rest[2] == ':' && parse_fixed_int(rest, 0, 2, oh) &&
                    parse_fixed_int(rest, 3, 2, om)) {
                } else if (rest.size() == 4 && parse_fixed_int(rest, 0, 2, oh) && parse_fixed_int(rest, 2, 2, om)) {
                } else if (rest.size() == 2 && parse_fixed_int(rest, 0, 2, oh)) {
                } else {
                    return false;
                }
                offset = sign * (oh * 60 + om);
            } else {
                return false;
            }
        }
    }
    out = epoch_day * 86400 + seconds - std::int64_t{offset} * 60;
    return true;
}

TickParseResult parse_ticks(std::istream& in, const TickFormat& format) {
    if (!in) throw Error(ErrorKind::io, "tick stream is not readable");

    TickParseResult result;
    std::string line;
    bool header_seen = false;
    std::size_t data_lines = 0;
    while (std::getline(in, line)) {
        const std::string_view row = trim(line);
        if (row.empty()) continue;
        if (!header_seen) {
            std::string lowered(row);
            lowered.erase(std::remove(lowered.begin(), lowered.end(), ' '), lowered.end());
            std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                           [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            if (lowered.rfind("\xEF\xBB\xBF", 0) == 0) lowered.erase(0, 3);
            if (lowered != "timestamp,price") {
                throw Error(ErrorKind::format, "tick CSV must start with the header 'timestamp,price'");
            }
            header_seen = true;
            continue;
        }
        ++data_lines;
        const auto comma = row.find(',');
        TickRecord tick;
        if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos ||
            !parse_timestamp(row.substr(0, comma), format.utc_offset_minutes, tick.timestamp) ||
            !parse_number(trim(row.substr(comma + 1)), tick.price) || !std::isfinite(tick.price) ||
            tick.price <= 0.0) {
            ++result.skipped;
            continue;
        }
        result.ticks.push_back(tick);
    }
    if (in.bad()) throw Error(ErrorKind::io, "error while reading tick stream");
    if (data_lines > 0 && 2 * result.skipped > data_lines) {
        throw Error(ErrorKind::format, std::to_string(result.skipped) + " of " + std::to_string(data_lines) +
                                           " tick lines are malformed");
    }
    return result;
}

TickParseResult parse_ticks_file(const std::string& path, const TickFormat& format) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io, "cannot open tick file '" + path + "'");
    return parse_ticks(in, format);
}

TradingCalendar::TradingCalendar(std::vector<Session> sessions, std::vector<std::int64_t> days,
                                 int utc_offset_minutes)
    : sessions_(std::move(sessions)), days_(std::move(days)), utc_offset_minutes_(utc_offset_minutes) {
    if (sessions_.empty()) throw Error(ErrorKind::config, "calendar needs at least one session");
    int previous_close = -1;
    for (const auto& s : sessions_) {
        if (s.open_minute < 0 || s.close_minute > 24 * 60 || s.open_minute >= s.close_minute) {
            throw Error(ErrorKind::config, "calendar session must satisfy 0 <= open < close <= 24:00");
        }
        if (s.open_minute < previous_close) {
            throw Error(ErrorKind::config, "calendar sessions must be disjoint and ordered");
        }
        previous_close = s.close_minute;
        for (int m = s.open_minute + 1; m <= s.close_minute; ++m) {
            mark_minutes_.push_back(m);
            session_open_.push_back(m == s.open_minute + 1);
        }
    }
    minutes_per_day_ = static_cast<int>(mark_minutes_.size());
    std::sort(days_.begin(), days_.end());
    days_.erase(std::unique(days_.begin(), days_.end()), days_.end());
}

TradingCalendar TradingCalendar::chinese_default() {
    return TradingCalendar({{9 * 60 + 30, 11 * 60 + 30}, {13 * 60, 15 * 60}});
}

TradingCalendar TradingCalendar::from_json_text(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::config, std::string("calendar JSON: ") + e.what());
    }
    if (!doc.is_object()) throw Error(ErrorKind::config, "calendar JSON must be an object");

    std::vector<Session> sessions;
    if (doc.contains("sessions")) {
        for (const auto& pair : doc.at("sessions")) {
            Session s;
            if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string() ||
                !parse_hhmm(pair[0].get<std::string>(), s.open_minute) ||
                !parse_hhmm(pair[1].get<std::string>(), s.close_minute)) {
                throw Error(ErrorKind::config, "calendar sessions must be [\"HH:MM\",\"HH:MM\"] pairs");
            }
            sessions.push_back(s);
        }
    } else {
        sessions = chinese_default().sessions();
    }

    std::vector<std::int64_t> days;
    if (doc.contains("days")) {
        for (const auto& d : doc.at("days")) {
            std::int64_t day = 0;
            if (!d.is_string() || !parse_date(d.get<std::string>(), day)) {
                throw Error(ErrorKind::config, "calendar days must be YYYY-MM-DD strings");
            }
            days.push_back(day);
        }
    }
    if (doc.contains("range")) {
        const auto& range = doc.at("range");
        std::int64_t from = 0;
        std::int64_t to = 0;
        if (!range.is_object() || !range.contains("from") || !range.contains("to") ||
            !parse_date(range.at("from").get<std::string>(), from) ||
            !parse_date(range.at("to").get<std::string>(), to) || from > to) {
            throw Error(ErrorKind::config, "calendar range needs ordered 'from' and 'to' dates");
        }
        std::set<unsigned> weekdays{1, 2, 3, 4, 5};
        if (range.contains("weekdays")) {
            weekdays.clear();
            for (const auto& w : range.at("weekdays")) {
                const auto v = w.get<int>();
                if (v < 1 || v > 7) throw Error(ErrorKind::config, "calendar weekdays use ISO numbering 1..7");
                weekdays.insert(static_cast<unsigned>(v));
            }
        }
        for (std::int64_t d = from; d <= to; ++d) {
            const std::chrono::weekday wd{std::chrono::sys_days{std::chrono::days{d}}};
            if (weekdays.count(wd.iso_encoding()) != 0) days.push_back(d);
        }
    }
    const int offset = doc.value("utc_offset_minutes", 0);
    return TradingCalendar(std::move(sessions), std::move(days), offset);
}

TradingCalendar TradingCalendar::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io, "cannot open calendar file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

int TradingCalendar::mark_minute(int slot) const { return mark_minutes_.at(static_cast<std::size_t>(slot)); }

std::int64_t TradingCalendar::mark_time(std::int64_t epoch_day, int slot) const {
    return epoch_day * 86400 + std::int64_t{mark_minute(slot)} * 60 - std::int64_t{utc_offset_minutes_} * 60;
}

bool TradingCalendar::opens_session(int slot) const { return session_open_.at(static_cast<std::size_t>(slot)); }

std::size_t MinuteSeries::present_count() const noexcept {
    return static_cast<std::size_t>(std::count(present.begin(), present.end(), std::uint8_t{1}));
}

MinuteSeries sample_minutely(std::span<const TickRecord> ticks_in, const TradingCalendar& cal) {
    std::vector<TickRecord> sorted;
    std::span<const TickRecord> ticks = ticks_in;
    const auto by_time = [](const TickRecord& a, const TickRecord& b) { return a.timestamp < b.timestamp; };
    if (!std::is_sorted(ticks.begin(), ticks.end(), by_time)) {
        sorted.assign(ticks.begin(), ticks.end());
        std::stable_sort(sorted.begin(), sorted.end(), by_time);
        ticks = sorted;
    }

    std::vector<std::int64_t> days = cal.days();
    if (days.empty()) {
        std::set<std::int64_t> seen;
        const std::int64_t shift = std::int64_t{cal.utc_offset_minutes()} * 60;
        for (const auto& t : ticks) seen.insert(floor_div(t.timestamp + shift, 86400));
        days.assign(seen.begin(), seen.end());
    }

    const int slots = cal.minutes_per_day();
    MinuteSeries out;
    out.slots_per_day = slots;
    std::vector<double> row(static_cast<std::size_t>(slots));
    std::vector<std::uint8_t> row_present(static_cast<std::size_t>(slots));
    for (const std::int64_t day : days) {
        bool any = false;
        for (int s = 0; s < slots; ++s) {
            const std::int64_t mark = cal.mark_time(day, s);
            // First tick at or after the mark, and the earliest-recorded tick of the last
            // timestamp before it.
            const auto after = std::lower_bound(ticks.begin(), ticks.end(), mark,
                                                [](const TickRecord& t, std::int64_t v) { return t.timestamp < v; });
            const TickRecord* best = nullptr;
            std::int64_t best_distance = kMarkWindowSeconds + 1;
            if (after != ticks.begin()) {
                const std::int64_t ts = std::prev(after)->timestamp;
                const auto first = std::lower_bound(ticks.begin(), after, ts, [](const TickRecord& t, std::int64_t v) {
                    return t.timestamp < v;
                });
                best = &*first;
                best_distance = mark - ts;
            }
            if (after != ticks.end() && after->timestamp - mark < best_distance) {
                best = &*after;
                best_distance = after->timestamp - mark;
            }
            const auto idx = static_cast<std::size_t>(s);
            if (best != nullptr && best_distance <= kMarkWindowSeconds) {
                row[idx] = best->price;
                row_present[idx] = 1;
                any = true;
            } else {
                row[idx] = 0.0;
                row_present[idx] = 0;
            }
        }
        if (!any) continue;
        out.days.push_back(day);
        out.price.insert(out.price.end(), row.begin(), row.end());
        out.present.insert(out.present.end(), row_present.begin(), row_present.end());
    }
    if (out.days.empty()) throw Error(ErrorKind::empty_series, "no ticks fall near any in-session minute mark");
    return out;
}

std::vector<TickRecord> to_ticks(const MinuteSeries& series, const TradingCalendar& cal) {
    std::vector<TickRecord> ticks;
    ticks.reserve(series.present_count());
    for (std::size_t d = 0; d < series.days.size(); ++d) {
        for (int s = 0; s < series.slots_per_day; ++s) {
            if (series.has(d, s)) ticks.push_back({cal.mark_time(series.days[d], s), series.at(d, s)});
        }
    }
    return ticks;
}

void write_minute_csv(std::ostream& out, const MinuteSeries& series, const TradingCalendar& cal) {
    out << "timestamp,price\n";
    char buf[64];
    for (const auto& tick : to_ticks(series, cal)) {
        std::snprintf(buf, sizeof buf, "%.17g", tick.price);
        out << format_timestamp(tick.timestamp, cal.utc_offset_minutes()) << ',' << buf << '\n';
    }
}

}  // namespace retint
