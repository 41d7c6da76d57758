// labels.hpp — binary target: beat the cross-sectional median intraday return.
#pragma once

#include <map>
#include <vector>

#include "intraday/panel.hpp"

namespace intraday {

struct LabeledDay {
    int day_index{0};
    double median_ir{0.0};
    std::map<int, int> labels;  // stock index -> {0, 1}
};

// Labels the period universe's stocks with present data at day t. Stocks are
// sorted by (intraday return, ticker); the first floor(n/2) get class 0, the
// rest class 1, which reproduces strict above/below-median labeling and
// breaks ties deterministically.
LabeledDay label_day(const PricePanel& panel, const std::vector<int>& universe, int t);

}  // namespace intraday
