#include "intraday/study_periods.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace intraday {

void ConstituencyTable::add(const std::string& ticker, Date start, Date end) {
    if (end < start) {
        throw Error("membership interval for " + ticker + " has end before start");
    }
    spans_.push_back({ticker, start, end});
}

bool ConstituencyTable::is_member(const std::string& ticker, const Date& on) const {
    for (const auto& span : spans_) {
        if (span.ticker == ticker && !(on < span.start) && !(span.end < on)) return true;
    }
    return false;
}

ConstituencyTable ConstituencyTable::load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open membership file: " + path);
    }
    ConstituencyTable table;
    std::string line;
    bool first = true;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first && line == "ticker,start_date,end_date") {
            first = false;
            continue;
        }
        first = false;
        std::stringstream ss(line);
        std::string ticker, start_s, end_s;
        if (!std::getline(ss, ticker, ',') || !std::getline(ss, start_s, ',') || !std::getline(ss, end_s)) {
            throw MalformedRowError(path + ":" + std::to_string(line_no) + ": expected ticker,start_date,end_date");
        }
        table.add(ticker, Date::parse(start_s), Date::parse(end_s));
    }
    return table;
}

std::vector<StudyPeriod> generate_periods(const TradingCalendar& calendar, const PeriodParams& params) {
    if (params.window_days <= params.train_days) {
        throw ConfigError("window_days must exceed train_days");
    }
    if (params.stride_days < 1) {
        throw ConfigError("stride_days must be >= 1");
    }
    if (params.stride_days < params.window_days - params.train_days) {
        throw ConfigError("stride_days below the trade-window length would overlap trade ranges");
    }
    const int n = calendar.size();
    if (n < params.window_days) {
        throw CalendarTooShortError("calendar has " + std::to_string(n) + " days, need at least " +
                                    std::to_string(params.window_days));
    }

    std::vector<StudyPeriod> periods;
    for (int start = 0;; start += params.stride_days) {
        const int end = std::min(start + params.window_days, n);
        if (end - start <= params.train_days) break;  // trade part would be empty
        StudyPeriod p;
        p.index = static_cast<int>(periods.size());
        p.full_range = {start, end};
        p.train_range = {start, start + params.train_days};
        p.trade_range = {start + params.train_days, end};
        periods.push_back(std::move(p));
        if (end == n) break;
    }
    return periods;
}

std::vector<int> build_universe(const PricePanel& panel, const StudyPeriod& period,
                                const ConstituencyTable& membership) {
    const Date& last_train_day = panel.calendar()[period.train_range.last - 1];
    std::vector<int> universe;
    for (int s = 0; s < panel.stocks(); ++s) {
        if (!membership.empty() && !membership.is_member(panel.ticker(s), last_train_day)) continue;
        if (!complete_history(panel, s, period.full_range)) continue;
        universe.push_back(s);
    }
    return universe;
}

}  // namespace intraday
