// synth.hpp — synthetic panels with a plantable intraday-return signal.
#pragma once

#include <cstdint>

#include "intraday/panel.hpp"

namespace intraday {

// Each stock's intraday return follows x_t = phi * x_{t-1} + noise, so day
// t's ir_{t,1} feature carries signal about day t's realized return when
// phi > 0; phi = 0 is the no-skill control.
struct SynthParams {
    int n_stocks{20};
    int n_years{6};
    double signal_phi{0.0};    // in [0, 1)
    double noise_scale{0.01};  // stddev of the innovation
    uint64_t seed{0};
    Date start_date{1990, 1, 2};

    void validate() const;
};

PricePanel make_synthetic_panel(const SynthParams& params);

}  // namespace intraday
