#include "intraday/backtest.hpp"

#include <algorithm>
#include <chrono>
#include <map>

#include "intraday/dataset.hpp"
#include "intraday/features.hpp"

namespace intraday {

void StrategyConfig::validate() const {
    if (k < 1) {
        throw ConfigError("k must be >= 1");
    }
    if (cost_per_halfturn < 0.0 || daily_total_cost < 0.0) {
        throw ConfigError("costs must be non-negative");
    }
}

std::vector<double> ReturnSeries::nets() const {
    std::vector<double> v;
    v.reserve(points.size());
    for (const auto& p : points) v.push_back(p.net_return);
    return v;
}

std::vector<double> ReturnSeries::grosses() const {
    std::vector<double> v;
    v.reserve(points.size());
    for (const auto& p : points) v.push_back(p.gross_return);
    return v;
}

std::vector<double> ReturnSeries::long_means() const {
    std::vector<double> v;
    v.reserve(points.size());
    for (const auto& p : points) v.push_back(p.gross_long_mean);
    return v;
}

std::vector<double> ReturnSeries::short_means() const {
    std::vector<double> v;
    v.reserve(points.size());
    for (const auto& p : points) v.push_back(p.gross_short_mean);
    return v;
}

PortfolioSelection select_portfolio(const std::vector<std::pair<int, double>>& probabilities,
                                    const std::set<int>& tradable_today, int k) {
    std::vector<std::pair<int, double>> ranked;
    ranked.reserve(probabilities.size());
    for (const auto& entry : probabilities) {
        if (tradable_today.count(entry.first)) ranked.push_back(entry);
    }
    if (ranked.empty()) {
        throw NoTradableStocksError("no tradable stocks to rank");
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    const int u = static_cast<int>(ranked.size());
    const int per_leg = u >= 2 * k ? k : u / 2;

    PortfolioSelection sel;
    sel.long_set.reserve(static_cast<std::size_t>(per_leg));
    sel.short_set.reserve(static_cast<std::size_t>(per_leg));
    for (int i = 0; i < per_leg; ++i) sel.long_set.push_back(ranked[static_cast<std::size_t>(i)].first);
    for (int i = 0; i < per_leg; ++i) {
        sel.short_set.push_back(ranked[static_cast<std::size_t>(u - 1 - i)].first);
    }
    return sel;
}

DailyResult daily_return(const PricePanel& panel, const std::vector<int>& long_set,
                         const std::vector<int>& short_set, int t, double daily_total_cost) {
    DailyResult result;
    result.day_index = t;
    result.long_set = long_set;
    result.short_set = short_set;

    double long_sum = 0.0;
    for (int s : long_set) long_sum += intraday_return(panel, s, t, 0);
    double short_sum = 0.0;
    for (int s : short_set) short_sum += -intraday_return(panel, s, t, 0);

    result.gross_long_mean = long_set.empty() ? 0.0 : long_sum / static_cast<double>(long_set.size());
    result.gross_short_mean =
        short_set.empty() ? 0.0 : short_sum / static_cast<double>(short_set.size());
    result.gross_return = result.gross_long_mean + result.gross_short_mean;
    result.net_return = result.gross_return - daily_total_cost;
    return result;
}

BacktestOutput run_backtest(const PricePanel& panel, const std::vector<StudyPeriod>& periods,
                            const ClassifierSpec& spec, const StrategyConfig& strategy) {
    strategy.validate();
    if (periods.empty()) {
        throw Error("backtest needs at least one study period");
    }

    BacktestOutput out;
    for (const StudyPeriod& period : periods) {
        const SplitDataset ds = build_dataset(panel, period, spec.kind);
        const FittedModel model = fit(spec, ds);
        const std::vector<double> probs = predict_proba(model, ds, DataSplit::trade);

        const auto decisions_start = std::chrono::steady_clock::now();
        std::map<int, std::vector<std::pair<int, double>>> by_day;
        for (std::size_t i = 0; i < ds.trade.size(); ++i) {
            by_day[ds.trade[i].day_index].push_back({ds.trade[i].stock_index, probs[i]});
        }

        int traded_days = 0;
        for (const auto& [t, entries] : by_day) {
            if (strategy.skip_degenerate_days) {
                const double first = entries.front().second;
                const bool degenerate = std::all_of(entries.begin(), entries.end(), [&](const auto& e) {
                    return e.second == first;
                });
                if (degenerate) continue;
            }

            std::set<int> tradable_today;
            for (const auto& [stock, prob] : entries) {
                if (tradable(panel, t, stock)) tradable_today.insert(stock);
            }
            const PortfolioSelection sel = select_portfolio(entries, tradable_today, strategy.k);
            const DailyResult day =
                daily_return(panel, sel.long_set, sel.short_set, t, strategy.daily_total_cost);

            ReturnPoint point;
            point.date = panel.calendar()[t];
            point.gross_return = day.gross_return;
            point.net_return = day.net_return;
            point.gross_long_mean = day.gross_long_mean;
            point.gross_short_mean = day.gross_short_mean;
            for (int s : day.long_set) point.long_tickers.push_back(panel.ticker(s));
            for (int s : day.short_set) point.short_tickers.push_back(panel.ticker(s));
            if (!out.series.points.empty() && !(out.series.points.back().date < point.date)) {
                throw Error("return series dates must be strictly increasing");
            }
            out.series.points.push_back(std::move(point));
            ++traded_days;
        }
        const double decision_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - decisions_start).count();

        PeriodTiming timing;
        timing.period_index = period.index;
        timing.universe_size = static_cast<int>(period.universe.size());
        timing.trade_days = traded_days;
        timing.epochs_run = model.meta.epochs_run;
        timing.fit_seconds = model.meta.fit_seconds;
        timing.mean_epoch_seconds = model.meta.mean_epoch_seconds;
        timing.decision_seconds_per_day =
            traded_days > 0 ? decision_seconds / traded_days : 0.0;
        out.timing.push_back(timing);
    }
    return out;
}

}  // namespace intraday
