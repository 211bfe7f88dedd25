#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace retint {

/// One recorded index level. `timestamp` is seconds since the Unix epoch (UTC).
struct TickRecord {
    std::int64_t timestamp = 0;
    double price = 0.0;

    friend bool operator==(const TickRecord&, const TickRecord&) = default;
};

/// How naive (zone-less) ISO-8601 timestamps are interpreted.
struct TickFormat {
    /// Offset of the exchange zone from UTC, applied to timestamps without a zone designator.
    int utc_offset_minutes = 0;
};

struct TickParseResult {
    std::vector<TickRecord> ticks;
    std::size_t skipped = 0;
};

/// Parses a `timestamp,price` CSV stream. Timestamps may be ISO-8601 or epoch seconds.
///
/// Malformed lines are skipped and counted; more than half malformed is a format error.
[[nodiscard]] TickParseResult parse_ticks(std::istream& in, const TickFormat& format = {});
[[nodiscard]] TickParseResult parse_ticks_file(const std::string& path, const TickFormat& format = {});

/// Parses "YYYY-MM-DD[THH:MM[:SS[.fff]]][Z|+hh:mm]" or a plain epoch-seconds number.
/// Returns false when the text is not a valid timestamp.
[[nodiscard]] bool parse_timestamp(std::string_view text, int default_offset_minutes, std::int64_t& out);

/// Days since 1970-01-01 for a proleptic Gregorian date.
[[nodiscard]] std::int64_t days_from_civil(int year, unsigned month, unsigned day) noexcept;
/// Formats an epoch day number as YYYY-MM-DD.
[[nodiscard]] std::string format_date(std::int64_t epoch_day);
/// Formats epoch seconds as YYYY-MM-DDTHH:MM:SS (UTC shifted by `offset_minutes`).
[[nodiscard]] std::string format_timestamp(std::int64_t epoch_seconds, int offset_minutes = 0);

/// A trading session as a half-open local-time minute range [open, close).
struct Session {
    int open_minute = 0;
    int close_minute = 0;
};

/// Exchange calendar: intraday sessions shared by all days, plus the trading days.
///
/// Minute marks sit at minute ends: a 09:30-11:30 session has marks 09:31 ... 11:30.
/// An empty `days` list means "every day that has in-session ticks".
class TradingCalendar {
public:
    TradingCalendar(std::vector<Session> sessions, std::vector<std::int64_t> days = {},
                    int utc_offset_minutes = 0);

    /// 09:30-11:30 and 13:00-15:00, 240 marks per day.
    [[nodiscard]] static TradingCalendar chinese_default();
    /// Reads `{"sessions": [["09:30","11:30"], ...], "days": [...] | "range": {...}}`.
    [[nodiscard]] static TradingCalendar from_json_file(const std::string& path);
    [[nodiscard]] static TradingCalendar from_json_text(std::string_view text);

    [[nodiscard]] const std::vector<Session>& sessions() const noexcept { return sessions_; }
    [[nodiscard]] const std::vector<std::int64_t>& days() const noexcept { return days_; }
    [[nodiscard]] int utc_offset_minutes() const noexcept { return utc_offset_minutes_; }
    [[nodiscard]] int minutes_per_day() const noexcept { return minutes_per_day_; }

    /// Local minute-of-day of mark `slot` (the end of that trading minute).
    [[nodiscard]] int mark_minute(int slot) const;
    /// Epoch seconds (UTC) of mark `slot` on `epoch_day`.
    [[nodiscard]] std::int64_t mark_time(std::int64_t epoch_day, int slot) const;
    /// True when `slot` is the first mark of a session (its return spans a gap).
    [[nodiscard]] bool opens_session(int slot) const;

private:
    std::vector<Session> sessions_;
    std::vector<std::int64_t> days_;
    int utc_offset_minutes_;
    int minutes_per_day_ = 0;
    std::vector<int> mark_minutes_;
    std::vector<bool> session_open_;
};

/// Per-minute prices on a calendar grid; day-major, one entry per (day, slot).
struct MinuteSeries {
    int slots_per_day = 0;
    std::vector<std::int64_t> days;  ///< epoch day of each row
    std::vector<double> price;       ///< size days.size() * slots_per_day
    std::vector<std::uint8_t> present;

    [[nodiscard]] std::size_t size() const noexcept { return price.size(); }
    [[nodiscard]] std::size_t present_count() const noexcept;
    [[nodiscard]] bool has(std::size_t day_index, int slot) const {
        return present[day_index * static_cast<std::size_t>(slots_per_day) + static_cast<std::size_t>(slot)] != 0;
    }
    [[nodiscard]] double at(std::size_t day_index, int slot) const {
        return price[day_index * static_cast<std::size_t>(slots_per_day) + static_cast<std::size_t>(slot)];
    }
};

/// Half-width of the window searched around each minute mark.
inline constexpr std::int64_t kMarkWindowSeconds = 30;

/// Samples the tick nearest each in-session minute mark (ties go to the earlier tick).
///
/// Marks with no tick within +-30 s are missing. Days without any sampled price are
/// dropped from the output.
[[nodiscard]] MinuteSeries sample_minutely(std::span<const TickRecord> ticks, const TradingCalendar& cal);

/// Flattens present slots back into tick records stamped exactly on their marks.
[[nodiscard]] std::vector<TickRecord> to_ticks(const MinuteSeries& series, const TradingCalendar& cal);

/// Writes the minute series as a `timestamp,price` CSV with ISO timestamps in exchange time.
void write_minute_csv(std::ostream& out, const MinuteSeries& series, const TradingCalendar& cal);

}  // namespace retint
