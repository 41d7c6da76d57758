#include "intraday/dataset.hpp"

#include <algorithm>
#include <cmath>

namespace intraday {

int SplitDataset::universe_slot(int stock_index) const {
    const auto& u = period.universe;
    auto it = std::lower_bound(u.begin(), u.end(), stock_index);
    if (it != u.end() && *it == stock_index) return static_cast<int>(it - u.begin());
    return -1;
}

FeatureSequence SplitDataset::sequence_for(const Sample& sample) const {
    const int slot = universe_slot(sample.stock_index);
    if (slot < 0) {
        throw IndexOutOfRangeError("sample stock not in period universe");
    }
    const int rel = sample.day_index - period.full_range.first;
    FeatureSequence seq;
    seq.stock_index = sample.stock_index;
    seq.day_index = sample.day_index;
    seq.values.assign(scaled_series[static_cast<std::size_t>(slot)].begin() + (rel - FeatureSequence::timesteps + 1),
                      scaled_series[static_cast<std::size_t>(slot)].begin() + rel + 1);
    return seq;
}

namespace {

bool sequence_window_defined(const std::vector<std::array<double, 3>>& series, int rel_day) {
    for (int i = rel_day - FeatureSequence::timesteps + 1; i <= rel_day; ++i) {
        if (i < 0) return false;
        for (double v : series[static_cast<std::size_t>(i)]) {
            if (std::isnan(v)) return false;
        }
    }
    return true;
}

}  // namespace

SplitDataset build_dataset(const PricePanel& panel, const StudyPeriod& period, ModelKind kind,
                           const LagSet& lags) {
    if (period.universe.empty()) {
        throw EmptyUniverseError("period " + std::to_string(period.index) + " has an empty universe");
    }

    SplitDataset ds;
    ds.kind = kind;
    ds.period = period;
    ds.feature_dim = kind == ModelKind::forest ? 3 * lags.count() : 0;

    const int start = period.full_range.first;
    const int train_len = period.train_range.length();
    const int full_len = period.full_range.length();

    // Labels for every training day, shared across stocks.
    std::vector<LabeledDay> day_labels;
    day_labels.reserve(static_cast<std::size_t>(train_len - kFeatureWarmupDays));
    for (int rel = kFeatureWarmupDays; rel < train_len; ++rel) {
        day_labels.push_back(label_day(panel, period.universe, start + rel));
    }

    if (kind == ModelKind::lstm) {
        ds.scalers.reserve(period.universe.size());
        ds.scaled_series.reserve(period.universe.size());
        for (int s : period.universe) {
            const ScalerParams params = fit_scaler(panel, s, period.train_range);
            std::vector<std::array<double, 3>> series(static_cast<std::size_t>(full_len));
            for (int rel = 0; rel < full_len; ++rel) {
                const int t = start + rel;
                auto& row = series[static_cast<std::size_t>(rel)];
                try {
                    row = {apply_scaler(params, intraday_return(panel, s, t, 1), FeatureKind::intraday),
                           apply_scaler(params, close_return(panel, s, t, 1), FeatureKind::close_rel),
                           apply_scaler(params, open_return(panel, s, t, 1), FeatureKind::open_rel)};
                } catch (const Error&) {
                    row = {std::nan(""), std::nan(""), std::nan("")};
                }
            }
            ds.scalers.push_back(params);
            ds.scaled_series.push_back(std::move(series));
        }
    }

    for (std::size_t slot = 0; slot < period.universe.size(); ++slot) {
        const int s = period.universe[slot];
        for (int rel = kFeatureWarmupDays; rel < full_len; ++rel) {
            const int t = start + rel;
            const bool is_train = rel < train_len;

            Sample sample;
            sample.stock_index = s;
            sample.day_index = t;
            if (is_train) {
                const auto& labels = day_labels[static_cast<std::size_t>(rel - kFeatureWarmupDays)].labels;
                auto it = labels.find(s);
                if (it == labels.end()) continue;  // no day-t data: not labelable
                sample.target = it->second;
            }

            if (kind == ModelKind::forest) {
                FeatureRow row;
                try {
                    row = forest_features(panel, s, t, lags);
                } catch (const Error&) {
                    if (is_train) continue;  // panel-start boundary / missing data: drop
                    throw;
                }
                auto& x = is_train ? ds.train_x : ds.trade_x;
                x.insert(x.end(), row.values.begin(), row.values.end());
            } else {
                if (!sequence_window_defined(ds.scaled_series[slot], rel)) {
                    if (is_train) continue;
                    throw MissingDataError("undefined sequence window at trade day " + std::to_string(t));
                }
            }
            (is_train ? ds.train : ds.trade).push_back(sample);
        }
    }
    return ds;
}

}  // namespace intraday
