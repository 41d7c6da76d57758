// dataset.hpp — per-period train/trade matrices with targets.
#pragma once

#include <array>
#include <vector>

#include "intraday/features.hpp"
#include "intraday/labels.hpp"
#include "intraday/study_periods.hpp"

namespace intraday {

enum class ModelKind { forest, lstm };

struct Sample {
    int stock_index{0};  // panel stock index
    int day_index{0};    // global calendar index
    int target{-1};      // -1 = unrealized (trade-time)
};

// Assembled per period: stocks in ticker order, days ascending. Forest
// feature rows are materialized (row i of `train_x`/`trade_x` belongs to
// samples[i]); LSTM sequences are stored compactly as one scaled m=1 feature
// series per universe stock and materialized on demand (windows overlap by
// 239 rows, so per-sample storage would be 240x redundant).
class SplitDataset {
public:
    ModelKind kind{ModelKind::forest};
    StudyPeriod period;
    int feature_dim{0};  // forest row width (3 * |lags|); 0 for lstm

    std::vector<Sample> train, trade;
    std::vector<double> train_x, trade_x;  // forest rows, row-major

    std::vector<ScalerParams> scalers;  // per universe slot
    // per universe slot: scaled (ir, cr, or) at each day of full_range;
    // NaN where a feature is undefined that early in the panel
    std::vector<std::vector<std::array<double, 3>>> scaled_series;

    const double* train_row(std::size_t i) const { return train_x.data() + i * static_cast<std::size_t>(feature_dim); }
    const double* trade_row(std::size_t i) const { return trade_x.data() + i * static_cast<std::size_t>(feature_dim); }

    int universe_slot(int stock_index) const;  // -1 when not in the universe
    FeatureSequence sequence_for(const Sample& sample) const;
};

// Feature rows for relative days [240, train_days) form the training block,
// [train_days, T_study) the trading block. Rows whose deepest lag reaches
// before the panel start (a panel-start boundary case) or hits missing data
// are dropped from training.
SplitDataset build_dataset(const PricePanel& panel, const StudyPeriod& period, ModelKind kind,
                           const LagSet& lags = standard_lags());

// First relative day with a fully populated feature window.
inline constexpr int kFeatureWarmupDays = 240;

}  // namespace intraday
