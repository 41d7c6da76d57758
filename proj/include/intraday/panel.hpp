// panel.hpp — date×stock panel of opening price, adjusted close, and volume.
#pragma once

#include <cmath>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "intraday/dates.hpp"
#include "intraday/errors.hpp"

namespace intraday {

enum class PanelFormat { csv_long };

// Immutable after load. Missing cells are NaN in all three matrices; a cell
// is either fully present (open, close, volume) or fully missing.
class PricePanel {
public:
    PricePanel() = default;
    PricePanel(TradingCalendar calendar, std::vector<std::string> tickers);

    int days() const { return calendar_.size(); }
    int stocks() const { return static_cast<int>(tickers_.size()); }
    const TradingCalendar& calendar() const { return calendar_; }
    const std::vector<std::string>& tickers() const { return tickers_; }
    const std::string& ticker(int s) const { return tickers_.at(static_cast<std::size_t>(s)); }
    int ticker_index(const std::string& symbol) const;  // -1 when absent

    double open(int t, int s) const { return open_[cell(t, s)]; }
    double close_adj(int t, int s) const { return close_[cell(t, s)]; }
    double volume(int t, int s) const { return volume_[cell(t, s)]; }

    bool present(int t, int s) const { return !std::isnan(open_[cell(t, s)]); }

    // Fills one cell; used by loaders and the synthetic generator.
    void set_cell(int t, int s, double open, double close_adj, double volume);

    // Copy of the [first,last) day range.
    PricePanel slice_days(IndexRange range) const;

    // Missing cells compare equal (NaN-aware); present prices compare bit-exact.
    bool operator==(const PricePanel& other) const;

private:
    std::size_t cell(int t, int s) const;

    TradingCalendar calendar_;
    std::vector<std::string> tickers_;
    std::vector<double> open_, close_, volume_;  // row-major [day][stock], NaN = missing
};

// Warnings (e.g. partially-present cells promoted to missing) are reported
// through this callback; default prints to stderr.
using WarningSink = std::function<void(const std::string&)>;

PricePanel load_panel(const std::string& path, PanelFormat format = PanelFormat::csv_long,
                      const WarningSink& warn = {});
PricePanel load_panel_stream(std::istream& in, const std::string& origin,
                             const WarningSink& warn = {});

// One row per present cell, full round-trip precision.
void save_panel(const PricePanel& panel, const std::string& path);
void save_panel_stream(const PricePanel& panel, std::ostream& out);

// True iff the cell is present and volume > 0.
bool tradable(const PricePanel& panel, int day_index, int stock_index);

// True iff every cell for the stock in [range.first, range.last) is present.
bool complete_history(const PricePanel& panel, int stock_index, IndexRange range);

// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double value);

}  // namespace intraday
