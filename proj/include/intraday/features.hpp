// features.hpp — the three return families, the 93-value forest vector, and
// the 240x3 robust-scaled LSTM sequence.
#pragma once

#include <array>
#include <vector>

#include "intraday/dates.hpp"
#include "intraday/panel.hpp"

namespace intraday {

enum class FeatureKind { intraday = 0, close_rel = 1, open_rel = 2 };

// {1..20} U {40,60,...,240}: daily lags for the first month, then monthly
// multi-period lags out to a year.
class LagSet {
public:
    LagSet();  // the standard 31-lag set
    explicit LagSet(std::vector<int> lags);

    const std::vector<int>& lags() const { return lags_; }
    int count() const { return static_cast<int>(lags_.size()); }
    int max_lag() const { return lags_.back(); }

private:
    std::vector<int> lags_;
};

const LagSet& standard_lags();

// ir_{t,m} = cp_{t-m}/op_{t-m} - 1. m = 0 is the prediction-day intraday
// return (the traded/labeled quantity).
double intraday_return(const PricePanel& panel, int stock, int t, int m);

// cr_{t,m} = cp_{t-1}/cp_{t-1-m} - 1; touches only closes strictly before t.
double close_return(const PricePanel& panel, int stock, int t, int m);

// or_{t,m} = op_t/cp_{t-m} - 1; op_t is the prediction day's open, known at
// the open.
double open_return(const PricePanel& panel, int stock, int t, int m);

struct FeatureRow {
    int stock_index{0};
    int day_index{0};
    std::vector<double> values;  // [ir block | cr block | or block], lags ascending
};

// Raw returns, no scaling. Throws IndexOutOfRangeError when the deepest lag
// reaches before day 0 and MissingDataError on absent cells.
FeatureRow forest_features(const PricePanel& panel, int stock, int t,
                           const LagSet& lags = standard_lags());

// Per-stock, per-family quartiles of the m=1 feature series over the
// training range.
struct ScalerParams {
    int stock_index{0};
    std::array<double, 3> q1{}, q2{}, q3{};  // indexed by FeatureKind
};

// Quartiles use linear interpolation between order statistics (type 7).
// Throws InsufficientDataError when a family has fewer than 4 observations.
ScalerParams fit_scaler(const PricePanel& panel, int stock, IndexRange train_range);

// (value - q2)/(q3 - q1); 0 when the IQR is degenerate.
double apply_scaler(const ScalerParams& params, double value, FeatureKind kind);

struct FeatureSequence {
    int stock_index{0};
    int day_index{0};
    static constexpr int timesteps = 240;
    static constexpr int features = 3;
    // Row i = standardized (ir, cr, or) at day t-239+i; last row is day t.
    std::vector<std::array<double, 3>> values;
};

FeatureSequence lstm_sequence(const PricePanel& panel, int stock, int t, const ScalerParams& params);

// Type-7 quantile (linear interpolation between order statistics) of an
// unsorted sample; p in [0, 1].
double quantile_type7(std::vector<double> values, double p);

}  // namespace intraday
