#include "intraday/dates.hpp"

#include <algorithm>
#include <cstdio>

namespace intraday {

bool is_leap_year(int year) {
    return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int days_in_month(int year, int month) {
    static constexpr int lengths[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2 && is_leap_year(year)) return 29;
    return lengths[month - 1];
}

bool Date::try_parse(const std::string& text, Date& out) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return false;
    for (int i : {0, 1, 2, 3, 5, 6, 8, 9}) {
        if (text[static_cast<std::size_t>(i)] < '0' || text[static_cast<std::size_t>(i)] > '9') return false;
    }
    Date d;
    d.year = (text[0] - '0') * 1000 + (text[1] - '0') * 100 + (text[2] - '0') * 10 + (text[3] - '0');
    d.month = (text[5] - '0') * 10 + (text[6] - '0');
    d.day = (text[8] - '0') * 10 + (text[9] - '0');
    if (d.month < 1 || d.month > 12) return false;
    if (d.day < 1 || d.day > days_in_month(d.year, d.month)) return false;
    out = d;
    return true;
}

Date Date::parse(const std::string& text) {
    Date d;
    if (!try_parse(text, d)) {
        throw std::invalid_argument("invalid ISO-8601 date: '" + text + "'");
    }
    return d;
}

std::string Date::to_string() const {
    char buf[11];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    return std::string(buf);
}

int Date::weekday() const {
    // Sakamoto's method, shifted so Monday = 0.
    static constexpr int t[12] = {0, 3, 2, 5, 0, 3, 5, 1, 4, 6, 2, 4};
    int y = year;
    if (month < 3) y -= 1;
    int dow_sun0 = (y + y / 4 - y / 100 + y / 400 + t[month - 1] + day) % 7;
    return (dow_sun0 + 6) % 7;
}

Date Date::next_weekday() const {
    Date d = *this;
    do {
        d.day += 1;
        if (d.day > days_in_month(d.year, d.month)) {
            d.day = 1;
            d.month += 1;
            if (d.month > 12) {
                d.month = 1;
                d.year += 1;
            }
        }
    } while (d.weekday() >= 5);
    return d;
}

TradingCalendar::TradingCalendar(std::vector<Date> days) : days_(std::move(days)) {
    for (std::size_t i = 1; i < days_.size(); ++i) {
        if (!(days_[i - 1] < days_[i])) {
            throw std::invalid_argument("calendar dates must be strictly increasing");
        }
    }
}

int TradingCalendar::lower_bound(const Date& d) const {
    auto it = std::lower_bound(days_.begin(), days_.end(), d);
    return static_cast<int>(it - days_.begin());
}

int TradingCalendar::index_of(const Date& d) const {
    int i = lower_bound(d);
    if (i < size() && days_[static_cast<std::size_t>(i)] == d) return i;
    return -1;
}

}  // namespace intraday
