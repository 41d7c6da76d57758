#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "intraday/backtest.hpp"
#include "intraday/rng.hpp"
#include "intraday/synth.hpp"

using namespace intraday;
using test_helpers::Cell;
using test_helpers::make_panel;

TEST_CASE("select_portfolio picks extremes") {
    const std::vector<std::pair<int, double>> probs = {{0, 0.9}, {1, 0.6}, {2, 0.4}, {3, 0.1}};
    const std::set<int> all = {0, 1, 2, 3};
    const PortfolioSelection sel = select_portfolio(probs, all, 1);
    CHECK(sel.long_set == std::vector<int>{0});
    CHECK(sel.short_set == std::vector<int>{3});
}

TEST_CASE("all-equal probabilities: ticker order breaks ties") {
    const std::vector<std::pair<int, double>> probs = {{0, 0.5}, {1, 0.5}, {2, 0.5}};
    const std::set<int> all = {0, 1, 2};
    const PortfolioSelection sel = select_portfolio(probs, all, 1);
    CHECK(sel.long_set == std::vector<int>{0});   // first ticker
    CHECK(sel.short_set == std::vector<int>{2});  // last ticker
}

TEST_CASE("short universe shrinks both legs to floor(u/2)") {
    std::vector<std::pair<int, double>> probs;
    std::set<int> tradable_set;
    for (int s = 0; s < 15; ++s) {
        probs.push_back({s, 0.01 * s});
        tradable_set.insert(s);
    }
    const PortfolioSelection sel = select_portfolio(probs, tradable_set, 10);
    CHECK(sel.long_set.size() == 7);
    CHECK(sel.short_set.size() == 7);
    for (int s : sel.long_set) CHECK(std::find(sel.short_set.begin(), sel.short_set.end(), s) == sel.short_set.end());
}

TEST_CASE("untradable stocks are excluded before ranking") {
    const std::vector<std::pair<int, double>> probs = {{0, 0.9}, {1, 0.8}, {2, 0.2}, {3, 0.1}};
    const std::set<int> tradable_set = {1, 2};
    const PortfolioSelection sel = select_portfolio(probs, tradable_set, 1);
    CHECK(sel.long_set == std::vector<int>{1});
    CHECK(sel.short_set == std::vector<int>{2});
    CHECK_THROWS_AS(select_portfolio(probs, {}, 1), NoTradableStocksError);
}

TEST_CASE("selection is invariant under strictly increasing probability transforms") {
    Rng rng(137, "rank-invariance");
    std::vector<std::pair<int, double>> probs;
    std::set<int> tradable_set;
    for (int s = 0; s < 30; ++s) {
        probs.push_back({s, rng.uniform()});
        tradable_set.insert(s);
    }
    const PortfolioSelection base = select_portfolio(probs, tradable_set, 5);
    auto transformed = probs;
    for (auto& [s, p] : transformed) p = std::exp(3.0 * p) - 0.5;
    const PortfolioSelection mapped = select_portfolio(transformed, tradable_set, 5);
    CHECK(base.long_set == mapped.long_set);
    CHECK(base.short_set == mapped.short_set);
}

namespace {

// Day-1 intraday returns pinned per stock.
PricePanel panel_with_day1_returns(const std::vector<double>& returns) {
    return make_panel(2, static_cast<int>(returns.size()), [&](int t, int s) {
        if (t == 0) return Cell{100.0, 100.0, 10.0};
        return Cell{100.0, 100.0 * (1.0 + returns[static_cast<std::size_t>(s)]), 10.0};
    });
}

}  // namespace

TEST_CASE("daily_return arithmetic") {
    const auto panel = panel_with_day1_returns({0.01, 0.03, -0.02, 0.00});
    const DailyResult day = daily_return(panel, {0, 1}, {2, 3}, 1);
    CHECK(day.gross_long_mean == doctest::Approx(0.02).epsilon(1e-12));
    CHECK(day.gross_short_mean == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(day.gross_return == doctest::Approx(0.03).epsilon(1e-12));
    CHECK(day.net_return == doctest::Approx(0.028).epsilon(1e-12));
}

TEST_CASE("zero returns still pay the cost") {
    const auto panel = panel_with_day1_returns({0.0, 0.0});
    const DailyResult day = daily_return(panel, {0}, {1}, 1);
    CHECK(day.gross_return == 0.0);
    CHECK(day.net_return == -0.002);
}

TEST_CASE("swapping legs negates the gross return") {
    Rng rng(139, "swap");
    std::vector<double> returns(10);
    for (auto& r : returns) r = rng.normal(0.0, 0.02);
    const auto panel = panel_with_day1_returns(returns);
    const DailyResult a = daily_return(panel, {0, 1, 2}, {7, 8, 9}, 1);
    const DailyResult b = daily_return(panel, {7, 8, 9}, {0, 1, 2}, 1);
    CHECK(a.gross_return == doctest::Approx(-b.gross_return).epsilon(1e-12));
}

TEST_CASE("gross return ignores a per-stock price rescale") {
    const std::vector<double> returns = {0.017, -0.004, 0.009, -0.013};
    const auto panel = panel_with_day1_returns(returns);
    PricePanel scaled = panel;
    for (int t = 0; t < panel.days(); ++t) {
        scaled.set_cell(t, 2, panel.open(t, 2) * 4.0, panel.close_adj(t, 2) * 4.0, panel.volume(t, 2));
    }
    const DailyResult a = daily_return(panel, {0, 2}, {1, 3}, 1);
    const DailyResult b = daily_return(scaled, {0, 2}, {1, 3}, 1);
    CHECK(a.gross_return == b.gross_return);
}

TEST_CASE("no-skill probabilities produce near-zero mean gross return") {
    Rng rng(149, "null-check");
    const int n_stocks = 50;
    const int n_days = 400;
    auto panel = make_panel(n_days, n_stocks, [&](int, int) {
        const double open = 100.0;
        return Cell{open, open * (1.0 + rng.normal(0.0, 0.01)), 10.0};
    });
    std::vector<double> daily;
    std::set<int> all;
    for (int s = 0; s < n_stocks; ++s) all.insert(s);
    for (int t = 0; t < n_days; ++t) {
        std::vector<std::pair<int, double>> probs;
        for (int s = 0; s < n_stocks; ++s) probs.push_back({s, rng.uniform()});
        const auto sel = select_portfolio(probs, all, 5);
        daily.push_back(daily_return(panel, sel.long_set, sel.short_set, t).gross_return);
    }
    double sum = 0.0, ss = 0.0;
    for (double r : daily) sum += r;
    const double mean = sum / static_cast<double>(daily.size());
    for (double r : daily) ss += (r - mean) * (r - mean);
    const double se = std::sqrt(ss / (daily.size() - 1.0)) / std::sqrt(static_cast<double>(daily.size()));
    CHECK(std::fabs(mean / se) < 4.0);  // no systematic edge
}

TEST_CASE("run_backtest on constant prices: gross 0, net -0.002 every day") {
    auto panel = test_helpers::constant_panel(1008, 6);
    auto periods = generate_periods(panel.calendar());
    for (auto& p : periods) p.universe = build_universe(panel, p);

    ClassifierSpec spec;
    spec.kind = ModelKind::forest;
    spec.forest.n_trees = 3;
    spec.forest.max_depth = 3;
    StrategyConfig strategy;
    strategy.k = 2;

    const BacktestOutput out = run_backtest(panel, periods, spec, strategy);
    REQUIRE(out.series.points.size() == 252);
    for (const auto& p : out.series.points) {
        CHECK(p.gross_return == 0.0);
        CHECK(p.net_return == -0.002);
        CHECK(p.long_tickers.size() == 2);
        CHECK(p.short_tickers.size() == 2);
    }
}

TEST_CASE("net equals gross minus the daily cost on every traded day") {
    SynthParams params;
    params.n_stocks = 8;
    params.n_years = 5;
    params.signal_phi = 0.2;
    params.seed = 5;
    const PricePanel panel = make_synthetic_panel(params);
    auto periods = generate_periods(panel.calendar());
    for (auto& p : periods) p.universe = build_universe(panel, p);

    ClassifierSpec spec;
    spec.kind = ModelKind::forest;
    spec.forest.n_trees = 4;
    spec.forest.max_depth = 4;
    StrategyConfig strategy;
    strategy.k = 2;

    const BacktestOutput out = run_backtest(panel, periods, spec, strategy);
    REQUIRE(out.series.points.size() == 2 * 252);
    for (const auto& p : out.series.points) {
        CHECK(p.net_return == p.gross_return - 0.002);  // bit-exact by construction
        CHECK(p.gross_return == p.gross_long_mean + p.gross_short_mean);
    }
    for (std::size_t i = 1; i < out.series.points.size(); ++i) {
        CHECK(out.series.points[i - 1].date < out.series.points[i].date);
    }
    CHECK(out.timing.size() == 2);
    for (const auto& t : out.timing) {
        CHECK(t.fit_seconds >= 0.0);
        CHECK(t.trade_days == 252);
    }
}

TEST_CASE("zero-volume days drop stocks from selection") {
    // Stock 0 has zero volume on every trade day; it must never be selected.
    auto panel = make_panel(1008, 5, [&](int t, int s) {
        Cell c{100.0, 100.0 + 0.1 * ((t * 7 + s * 13) % 11), 1000.0};
        if (s == 0 && t >= 756) c.volume = 0.0;
        return c;
    });
    auto periods = generate_periods(panel.calendar());
    for (auto& p : periods) p.universe = build_universe(panel, p);

    ClassifierSpec spec;
    spec.kind = ModelKind::forest;
    spec.forest.n_trees = 2;
    spec.forest.max_depth = 2;
    StrategyConfig strategy;
    strategy.k = 2;

    const BacktestOutput out = run_backtest(panel, periods, spec, strategy);
    for (const auto& p : out.series.points) {
        for (const auto& ticker : p.long_tickers) CHECK(ticker != "T000");
        for (const auto& ticker : p.short_tickers) CHECK(ticker != "T000");
    }
}

TEST_CASE("planted signal earns a positive gross mean") {
    SynthParams params;
    params.n_stocks = 20;
    params.n_years = 5;
    params.signal_phi = 0.35;
    params.seed = 17;
    const PricePanel panel = make_synthetic_panel(params);
    auto periods = generate_periods(panel.calendar());
    for (auto& p : periods) p.universe = build_universe(panel, p);

    ClassifierSpec spec;
    spec.kind = ModelKind::forest;
    spec.seed = 17;
    spec.forest.n_trees = 20;
    StrategyConfig strategy;
    strategy.k = 3;

    const BacktestOutput out = run_backtest(panel, periods, spec, strategy);
    const auto gross = out.series.grosses();
    double sum = 0.0;
    for (double g : gross) sum += g;
    CHECK(sum / static_cast<double>(gross.size()) > 0.0);
}
