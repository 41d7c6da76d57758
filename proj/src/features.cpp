#include "intraday/features.hpp"

#include <algorithm>
#include <cmath>

namespace intraday {

namespace {

void check_stock(const PricePanel& panel, int stock) {
    if (stock < 0 || stock >= panel.stocks()) {
        throw IndexOutOfRangeError("stock index " + std::to_string(stock) + " out of range");
    }
}

void check_day(const PricePanel& panel, int t, int stock) {
    if (t < 0 || t >= panel.days()) {
        throw IndexOutOfRangeError("day index " + std::to_string(t) + " out of range for stock " +
                                   std::to_string(stock));
    }
}

double require_present(const PricePanel& panel, int t, int s, double value) {
    if (std::isnan(value)) {
        throw MissingDataError("missing cell at day " + std::to_string(t) + ", stock " + panel.ticker(s));
    }
    return value;
}

}  // namespace

LagSet::LagSet() {
    for (int m = 1; m <= 20; ++m) lags_.push_back(m);
    for (int m = 40; m <= 240; m += 20) lags_.push_back(m);
}

LagSet::LagSet(std::vector<int> lags) : lags_(std::move(lags)) {
    if (lags_.empty()) {
        throw Error("lag set must be non-empty");
    }
    for (std::size_t i = 0; i < lags_.size(); ++i) {
        if (lags_[i] < 1 || (i > 0 && lags_[i] <= lags_[i - 1])) {
            throw Error("lags must be strictly increasing and >= 1");
        }
    }
}

const LagSet& standard_lags() {
    static const LagSet lags;
    return lags;
}

double intraday_return(const PricePanel& panel, int stock, int t, int m) {
    check_stock(panel, stock);
    if (m < 0 || t - m < 0) {
        throw IndexOutOfRangeError("intraday_return needs day " + std::to_string(t - m));
    }
    check_day(panel, t, stock);
    const int d = t - m;
    const double op = require_present(panel, d, stock, panel.open(d, stock));
    const double cp = require_present(panel, d, stock, panel.close_adj(d, stock));
    return cp / op - 1.0;
}

double close_return(const PricePanel& panel, int stock, int t, int m) {
    check_stock(panel, stock);
    if (m < 1 || t - 1 - m < 0) {
        throw IndexOutOfRangeError("close_return needs day " + std::to_string(t - 1 - m));
    }
    check_day(panel, t, stock);
    const double cp_prev = require_present(panel, t - 1, stock, panel.close_adj(t - 1, stock));
    const double cp_lag = require_present(panel, t - 1 - m, stock, panel.close_adj(t - 1 - m, stock));
    return cp_prev / cp_lag - 1.0;
}

double open_return(const PricePanel& panel, int stock, int t, int m) {
    check_stock(panel, stock);
    if (m < 1 || t - m < 0) {
        throw IndexOutOfRangeError("open_return needs day " + std::to_string(t - m));
    }
    check_day(panel, t, stock);
    const double op_t = require_present(panel, t, stock, panel.open(t, stock));
    const double cp_lag = require_present(panel, t - m, stock, panel.close_adj(t - m, stock));
    return op_t / cp_lag - 1.0;
}

FeatureRow forest_features(const PricePanel& panel, int stock, int t, const LagSet& lags) {
    FeatureRow row;
    row.stock_index = stock;
    row.day_index = t;
    row.values.reserve(3 * static_cast<std::size_t>(lags.count()));
    for (int m : lags.lags()) row.values.push_back(intraday_return(panel, stock, t, m));
    for (int m : lags.lags()) row.values.push_back(close_return(panel, stock, t, m));
    for (int m : lags.lags()) row.values.push_back(open_return(panel, stock, t, m));
    return row;
}

double quantile_type7(std::vector<double> values, double p) {
    if (values.empty()) {
        throw InsufficientDataError("quantile of empty sample");
    }
    std::sort(values.begin(), values.end());
    const double h = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= values.size()) return values.back();
    const double frac = h - static_cast<double>(lo);
    return values[lo] + frac * (values[lo + 1] - values[lo]);
}

ScalerParams fit_scaler(const PricePanel& panel, int stock, IndexRange train_range) {
    check_stock(panel, stock);
    if (train_range.empty()) {
        throw InsufficientDataError("empty training range for scaler");
    }

    ScalerParams params;
    params.stock_index = stock;
    for (int kind = 0; kind < 3; ++kind) {
        std::vector<double> series;
        series.reserve(static_cast<std::size_t>(train_range.length()));
        for (int t = train_range.first; t < train_range.last; ++t) {
            double value;
            try {
                switch (static_cast<FeatureKind>(kind)) {
                    case FeatureKind::intraday: value = intraday_return(panel, stock, t, 1); break;
                    case FeatureKind::close_rel: value = close_return(panel, stock, t, 1); break;
                    default: value = open_return(panel, stock, t, 1); break;
                }
            } catch (const IndexOutOfRangeError&) {
                continue;  // feature undefined this early in the panel
            } catch (const MissingDataError&) {
                continue;
            }
            series.push_back(value);
        }
        if (series.size() < 4) {
            throw InsufficientDataError("scaler for stock " + panel.ticker(stock) + " has " +
                                        std::to_string(series.size()) + " observations, need 4");
        }
        params.q1[static_cast<std::size_t>(kind)] = quantile_type7(series, 0.25);
        params.q2[static_cast<std::size_t>(kind)] = quantile_type7(series, 0.50);
        params.q3[static_cast<std::size_t>(kind)] = quantile_type7(series, 0.75);
    }
    return params;
}

double apply_scaler(const ScalerParams& params, double value, FeatureKind kind) {
    const auto k = static_cast<std::size_t>(kind);
    const double iqr = params.q3[k] - params.q1[k];
    if (iqr == 0.0) return 0.0;
    return (value - params.q2[k]) / iqr;
}

FeatureSequence lstm_sequence(const PricePanel& panel, int stock, int t, const ScalerParams& params) {
    FeatureSequence seq;
    seq.stock_index = stock;
    seq.day_index = t;
    seq.values.reserve(FeatureSequence::timesteps);
    for (int i = 0; i < FeatureSequence::timesteps; ++i) {
        const int d = t - (FeatureSequence::timesteps - 1) + i;
        seq.values.push_back({
            apply_scaler(params, intraday_return(panel, stock, d, 1), FeatureKind::intraday),
            apply_scaler(params, close_return(panel, stock, d, 1), FeatureKind::close_rel),
            apply_scaler(params, open_return(panel, stock, d, 1), FeatureKind::open_rel),
        });
    }
    return seq;
}

}  // namespace intraday
