#include "intraday/panel.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <tuple>

namespace intraday {

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

void default_warn(const std::string& msg) { std::cerr << "warning: " << msg << "\n"; }

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

// Empty field = missing. Returns false on a malformed number.
bool parse_field(const std::string& text, double& out, bool& missing) {
    if (text.empty()) {
        missing = true;
        out = kMissing;
        return true;
    }
    missing = false;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc{} && ptr == end;
}

struct RawCell {
    double open, close, volume;
    bool any_missing;
};

}  // namespace

std::string format_double(double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    (void)ec;
    return std::string(buf, ptr);
}

PricePanel::PricePanel(TradingCalendar calendar, std::vector<std::string> tickers)
    : calendar_(std::move(calendar)), tickers_(std::move(tickers)) {
    const std::size_t n = static_cast<std::size_t>(calendar_.size()) * tickers_.size();
    open_.assign(n, kMissing);
    close_.assign(n, kMissing);
    volume_.assign(n, kMissing);
}

std::size_t PricePanel::cell(int t, int s) const {
    if (t < 0 || t >= days() || s < 0 || s >= stocks()) {
        throw IndexOutOfRangeError("panel cell (" + std::to_string(t) + "," + std::to_string(s) +
                                   ") outside " + std::to_string(days()) + "x" + std::to_string(stocks()));
    }
    return static_cast<std::size_t>(t) * static_cast<std::size_t>(stocks()) + static_cast<std::size_t>(s);
}

int PricePanel::ticker_index(const std::string& symbol) const {
    auto it = std::lower_bound(tickers_.begin(), tickers_.end(), symbol);
    if (it != tickers_.end() && *it == symbol) return static_cast<int>(it - tickers_.begin());
    return -1;
}

void PricePanel::set_cell(int t, int s, double open, double close_adj, double volume) {
    const std::size_t i = cell(t, s);
    open_[i] = open;
    close_[i] = close_adj;
    volume_[i] = volume;
}

bool PricePanel::operator==(const PricePanel& other) const {
    auto same = [](const std::vector<double>& a, const std::vector<double>& b) {
        if (a.size() != b.size()) return false;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const bool na = std::isnan(a[i]), nb = std::isnan(b[i]);
            if (na != nb) return false;
            if (!na && a[i] != b[i]) return false;
        }
        return true;
    };
    return calendar_ == other.calendar_ && tickers_ == other.tickers_ && same(open_, other.open_) &&
           same(close_, other.close_) && same(volume_, other.volume_);
}

PricePanel PricePanel::slice_days(IndexRange range) const {
    if (range.first < 0 || range.last > days() || range.first > range.last) {
        throw IndexOutOfRangeError("slice range outside calendar");
    }
    std::vector<Date> sub(calendar_.days().begin() + range.first, calendar_.days().begin() + range.last);
    PricePanel out(TradingCalendar(std::move(sub)), tickers_);
    for (int t = range.first; t < range.last; ++t) {
        for (int s = 0; s < stocks(); ++s) {
            const std::size_t src = cell(t, s);
            out.set_cell(t - range.first, s, open_[src], close_[src], volume_[src]);
        }
    }
    return out;
}

PricePanel load_panel(const std::string& path, PanelFormat format, const WarningSink& warn) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open panel file: " + path);
    }
    (void)format;  // csv_long is the only variant
    return load_panel_stream(in, path, warn);
}

PricePanel load_panel_stream(std::istream& in, const std::string& origin, const WarningSink& warn) {
    const WarningSink& sink = warn ? warn : WarningSink(default_warn);

    std::string line;
    if (!std::getline(in, line)) {
        throw MalformedRowError(origin + ": empty file");
    }
    {
        auto header = split_csv_line(line);
        const std::vector<std::string> expected = {"date", "ticker", "open", "close_adj", "volume"};
        if (std::vector<std::string>(header.begin(), header.end()) != expected) {
            throw MalformedRowError(origin + ": expected header 'date,ticker,open,close_adj,volume'");
        }
    }

    std::map<std::pair<Date, std::string>, RawCell> cells;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = split_csv_line(line);
        const std::string where = origin + ":" + std::to_string(line_no);
        if (fields.size() != 5) {
            throw MalformedRowError(where + ": expected 5 fields, got " + std::to_string(fields.size()));
        }
        Date date;
        if (!Date::try_parse(fields[0], date)) {
            throw MalformedRowError(where + ": bad date '" + fields[0] + "'");
        }
        const std::string& ticker = fields[1];
        if (ticker.empty() || ticker.find_first_of(" \t") != std::string::npos) {
            throw MalformedRowError(where + ": bad ticker '" + ticker + "'");
        }
        RawCell c{};
        bool miss_open = false, miss_close = false, miss_vol = false;
        if (!parse_field(fields[2], c.open, miss_open)) {
            throw MalformedRowError(where + ": bad number '" + fields[2] + "'");
        }
        if (!parse_field(fields[3], c.close, miss_close)) {
            throw MalformedRowError(where + ": bad number '" + fields[3] + "'");
        }
        if (!parse_field(fields[4], c.volume, miss_vol)) {
            throw MalformedRowError(where + ": bad number '" + fields[4] + "'");
        }
        if (!miss_open && c.open <= 0.0) {
            throw NonPositivePriceError(where + ": open = " + fields[2]);
        }
        if (!miss_close && c.close <= 0.0) {
            throw NonPositivePriceError(where + ": close_adj = " + fields[3]);
        }
        if (!miss_vol && c.volume < 0.0) {
            throw MalformedRowError(where + ": negative volume '" + fields[4] + "'");
        }
        c.any_missing = miss_open || miss_close || miss_vol;
        auto key = std::make_pair(date, ticker);
        if (!cells.emplace(key, c).second) {
            throw DuplicateObservationError(where + ": duplicate (" + fields[0] + "," + ticker + ")");
        }
    }

    std::vector<Date> dates;
    std::vector<std::string> tickers;
    for (const auto& [key, cell] : cells) {
        if (dates.empty() || dates.back() != key.first) dates.push_back(key.first);
        tickers.push_back(key.second);
    }
    std::sort(dates.begin(), dates.end());
    dates.erase(std::unique(dates.begin(), dates.end()), dates.end());
    std::sort(tickers.begin(), tickers.end());
    tickers.erase(std::unique(tickers.begin(), tickers.end()), tickers.end());

    PricePanel panel{TradingCalendar(std::move(dates)), std::move(tickers)};
    for (const auto& [key, c] : cells) {
        const int t = panel.calendar().index_of(key.first);
        const int s = panel.ticker_index(key.second);
        if (c.any_missing) {
            const bool all_missing = std::isnan(c.open) && std::isnan(c.close) && std::isnan(c.volume);
            if (!all_missing) {
                sink(origin + ": partially-present cell (" + key.first.to_string() + "," + key.second +
                     ") promoted to missing");
            }
            continue;  // cells default to missing
        }
        panel.set_cell(t, s, c.open, c.close, c.volume);
    }
    return panel;
}

void save_panel(const PricePanel& panel, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write panel file: " + path);
    }
    save_panel_stream(panel, out);
}

void save_panel_stream(const PricePanel& panel, std::ostream& out) {
    out << "date,ticker,open,close_adj,volume\n";
    for (int t = 0; t < panel.days(); ++t) {
        const std::string date = panel.calendar()[t].to_string();
        for (int s = 0; s < panel.stocks(); ++s) {
            if (!panel.present(t, s)) continue;
            out << date << ',' << panel.ticker(s) << ',' << format_double(panel.open(t, s)) << ','
                << format_double(panel.close_adj(t, s)) << ',' << format_double(panel.volume(t, s)) << '\n';
        }
    }
}

bool tradable(const PricePanel& panel, int day_index, int stock_index) {
    if (!panel.present(day_index, stock_index)) return false;
    return panel.volume(day_index, stock_index) > 0.0;
}

bool complete_history(const PricePanel& panel, int stock_index, IndexRange range) {
    if (range.first < 0 || range.last > panel.days()) {
        throw IndexOutOfRangeError("history range outside calendar");
    }
    if (stock_index < 0 || stock_index >= panel.stocks()) {
        throw IndexOutOfRangeError("stock index " + std::to_string(stock_index) + " out of range");
    }
    for (int t = range.first; t < range.last; ++t) {
        if (!panel.present(t, stock_index)) return false;
    }
    return true;
}

}  // namespace intraday
