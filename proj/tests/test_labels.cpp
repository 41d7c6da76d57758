#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "intraday/labels.hpp"
#include "intraday/rng.hpp"

using namespace intraday;
using test_helpers::Cell;
using test_helpers::make_panel;

namespace {

// Panel whose day-1 intraday returns are exactly `returns`.
PricePanel panel_with_returns(const std::vector<double>& returns) {
    return make_panel(2, static_cast<int>(returns.size()), [&](int t, int s) {
        if (t == 0) return Cell{100.0, 100.0, 10.0};
        return Cell{100.0, 100.0 * (1.0 + returns[static_cast<std::size_t>(s)]), 10.0};
    });
}

std::vector<int> all_stocks(int n) {
    std::vector<int> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i;
    return v;
}

}  // namespace

TEST_CASE("label_day splits at the cross-sectional median") {
    const auto panel = panel_with_returns({-0.01, 0.00, 0.02, 0.05});
    const LabeledDay day = label_day(panel, all_stocks(4), 1);
    CHECK(day.median_ir == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(day.labels.at(0) == 0);
    CHECK(day.labels.at(1) == 0);
    CHECK(day.labels.at(2) == 1);
    CHECK(day.labels.at(3) == 1);
}

TEST_CASE("ties split deterministically by ticker") {
    const auto panel = panel_with_returns({0.01, 0.01, 0.01, 0.01, 0.01});
    const LabeledDay day = label_day(panel, all_stocks(5), 1);
    // floor(5/2) = 2 zeros on the lexicographically first tickers.
    CHECK(day.labels.at(0) == 0);
    CHECK(day.labels.at(1) == 0);
    CHECK(day.labels.at(2) == 1);
    CHECK(day.labels.at(3) == 1);
    CHECK(day.labels.at(4) == 1);
}

TEST_CASE("a single stock gets label 1") {
    const auto panel = panel_with_returns({0.003});
    const LabeledDay day = label_day(panel, {0}, 1);
    CHECK(day.labels.size() == 1);
    CHECK(day.labels.at(0) == 1);
}

TEST_CASE("stocks with missing day-t data are excluded") {
    auto panel = make_panel(2, 3, [&](int t, int s) {
        Cell c{100.0, 100.0 + s, 10.0};
        if (t == 1 && s == 1) c.missing = true;
        return c;
    });
    const LabeledDay day = label_day(panel, all_stocks(3), 1);
    CHECK(day.labels.size() == 2);
    CHECK(day.labels.count(1) == 0);
}

TEST_CASE("empty universe is rejected") {
    const auto panel = panel_with_returns({0.01});
    CHECK_THROWS_AS(label_day(panel, {}, 1), EmptyUniverseError);
}

TEST_CASE("class counts differ by at most one on random cross-sections") {
    Rng rng(31, "label-balance");
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 1 + static_cast<int>(rng.uniform_index(401));
        std::vector<double> returns(static_cast<std::size_t>(n));
        for (auto& r : returns) r = 0.02 * (rng.uniform() - 0.5);
        if (trial % 3 == 0) {  // force ties
            for (std::size_t i = 0; i + 1 < returns.size(); i += 2) returns[i + 1] = returns[i];
        }
        const auto panel = panel_with_returns(returns);
        const LabeledDay day = label_day(panel, all_stocks(n), 1);
        int ones = 0;
        for (const auto& [stock, label] : day.labels) ones += label;
        const int zeros = static_cast<int>(day.labels.size()) - ones;
        CHECK(std::abs(ones - zeros) <= 1);
    }
}

TEST_CASE("labels are invariant under shifts and monotone transforms") {
    Rng rng(37, "label-invariance");
    const int n = 41;
    std::vector<double> returns(static_cast<std::size_t>(n));
    for (auto& r : returns) r = 0.05 * (rng.uniform() - 0.5);

    const auto base = label_day(panel_with_returns(returns), all_stocks(n), 1);

    std::vector<double> shifted = returns;
    for (auto& r : shifted) r += 0.013;
    const auto shifted_day = label_day(panel_with_returns(shifted), all_stocks(n), 1);
    CHECK(shifted_day.labels == base.labels);

    std::vector<double> transformed = returns;
    for (auto& r : transformed) r = std::tanh(3.0 * r) + 0.2 * r;  // strictly increasing
    const auto transformed_day = label_day(panel_with_returns(transformed), all_stocks(n), 1);
    CHECK(transformed_day.labels == base.labels);
}
