// Shared builders for synthetic panels and CSV fixtures.
#pragma once

#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "intraday/panel.hpp"

namespace test_helpers {

// open/close/volume for one cell; volume <= 0 with open NaN marks missing.
struct Cell {
    double open{0}, close{0}, volume{0};
    bool missing{false};
};

using CellFn = std::function<Cell(int day, int stock)>;

inline intraday::TradingCalendar weekday_calendar(int n_days,
                                                  intraday::Date start = {1990, 1, 2}) {
    std::vector<intraday::Date> days;
    days.reserve(static_cast<std::size_t>(n_days));
    intraday::Date d = start;
    if (d.weekday() >= 5) d = d.next_weekday();
    for (int i = 0; i < n_days; ++i) {
        days.push_back(d);
        d = d.next_weekday();
    }
    return intraday::TradingCalendar(std::move(days));
}

inline std::vector<std::string> default_tickers(int n) {
    std::vector<std::string> tickers;
    for (int s = 0; s < n; ++s) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "T%03d", s);
        tickers.emplace_back(buf);
    }
    return tickers;
}

inline intraday::PricePanel make_panel(int n_days, int n_stocks, const CellFn& fn) {
    intraday::PricePanel panel{weekday_calendar(n_days), default_tickers(n_stocks)};
    for (int t = 0; t < n_days; ++t) {
        for (int s = 0; s < n_stocks; ++s) {
            const Cell c = fn(t, s);
            if (!c.missing) panel.set_cell(t, s, c.open, c.close, c.volume);
        }
    }
    return panel;
}

// op = cp = value everywhere; every return is zero.
inline intraday::PricePanel constant_panel(int n_days, int n_stocks, double value = 100.0) {
    return make_panel(n_days, n_stocks, [value](int, int) { return Cell{value, value, 1000.0}; });
}

inline intraday::PricePanel panel_from_csv(const std::string& csv,
                                           const intraday::WarningSink& warn = {}) {
    std::istringstream in(csv);
    return intraday::load_panel_stream(in, "<inline>", warn);
}

inline std::string panel_to_csv(const intraday::PricePanel& panel) {
    std::ostringstream out;
    intraday::save_panel_stream(panel, out);
    return out.str();
}

}  // namespace test_helpers
