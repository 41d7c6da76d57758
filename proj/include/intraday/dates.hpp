// dates.hpp
#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace intraday {

// Calendar date, ISO-8601 "YYYY-MM-DD" on the wire.
struct Date {
    int year{0};
    int month{0};
    int day{0};

    auto operator<=>(const Date&) const = default;

    static Date parse(const std::string& text);
    static bool try_parse(const std::string& text, Date& out);
    std::string to_string() const;

    // Next calendar day, skipping Saturdays and Sundays.
    Date next_weekday() const;
    int weekday() const;  // 0 = Monday .. 6 = Sunday
};

bool is_leap_year(int year);
int days_in_month(int year, int month);

// Half-open [first, last) range of day indices into a TradingCalendar.
struct IndexRange {
    int first{0};
    int last{0};

    int length() const { return last - first; }
    bool empty() const { return last <= first; }
    bool contains(int i) const { return i >= first && i < last; }

    bool operator==(const IndexRange&) const = default;
};

// Strictly increasing list of trading dates.
class TradingCalendar {
public:
    TradingCalendar() = default;
    explicit TradingCalendar(std::vector<Date> days);

    int size() const { return static_cast<int>(days_.size()); }
    const Date& operator[](int i) const { return days_.at(static_cast<std::size_t>(i)); }
    const std::vector<Date>& days() const { return days_; }

    // Index of the first day >= d (== size() when none).
    int lower_bound(const Date& d) const;
    // Index of d, or -1 when absent.
    int index_of(const Date& d) const;

    bool operator==(const TradingCalendar&) const = default;

private:
    std::vector<Date> days_;
};

}  // namespace intraday
