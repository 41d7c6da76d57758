// backtest.hpp — daily top-k/bottom-k long-short selection, costed returns,
// and the walk-forward loop across study periods.
#pragma once

#include <set>
#include <utility>
#include <vector>

#include "intraday/dates.hpp"
#include "intraday/models.hpp"
#include "intraday/panel.hpp"
#include "intraday/study_periods.hpp"

namespace intraday {

struct StrategyConfig {
    int k{10};
    double cost_per_halfturn{0.0005};
    double daily_total_cost{0.002};  // 4 half-turns: open+close on each leg
    bool skip_degenerate_days{false};

    void validate() const;
};

struct DailyResult {
    int day_index{0};
    std::vector<int> long_set;   // descending probability
    std::vector<int> short_set;  // ascending probability
    double gross_long_mean{0};
    double gross_short_mean{0};
    double gross_return{0};
    double net_return{0};
};

struct ReturnPoint {
    Date date;
    double gross_return{0};
    double net_return{0};
    double gross_long_mean{0};
    double gross_short_mean{0};
    std::vector<std::string> long_tickers;
    std::vector<std::string> short_tickers;
};

struct ReturnSeries {
    std::vector<ReturnPoint> points;

    std::vector<double> nets() const;
    std::vector<double> grosses() const;
    std::vector<double> long_means() const;
    std::vector<double> short_means() const;
};

struct PeriodTiming {
    int period_index{0};
    int universe_size{0};
    int trade_days{0};
    int epochs_run{0};
    double fit_seconds{0};
    double mean_epoch_seconds{0};
    double decision_seconds_per_day{0};
};

struct BacktestOutput {
    ReturnSeries series;
    std::vector<PeriodTiming> timing;
};

struct PortfolioSelection {
    std::vector<int> long_set;
    std::vector<int> short_set;
};

// Ranks tradable stocks by probability; ties resolve by stock index, which
// equals ticker order for panels (tickers are sorted on load). With fewer
// than 2k tradable stocks each leg shrinks to floor(u/2).
PortfolioSelection select_portfolio(const std::vector<std::pair<int, double>>& probabilities,
                                    const std::set<int>& tradable_today, int k);

// Equal-weight legs: gross = mean long ir + mean (-ir) short; net = gross -
// daily_total_cost.
DailyResult daily_return(const PricePanel& panel, const std::vector<int>& long_set,
                         const std::vector<int>& short_set, int t, double daily_total_cost = 0.002);

// Per period: assemble, fit, predict, trade each day; series concatenated in
// date order. Periods must carry their universes.
BacktestOutput run_backtest(const PricePanel& panel, const std::vector<StudyPeriod>& periods,
                            const ClassifierSpec& spec, const StrategyConfig& strategy);

}  // namespace intraday
