#include "intraday/synth.hpp"

#include <algorithm>
#include <cmath>

#include "intraday/rng.hpp"

namespace intraday {

void SynthParams::validate() const {
    if (n_stocks < 1 || n_years < 1) {
        throw ConfigError("synthetic panel needs at least 1 stock and 1 year");
    }
    if (signal_phi < 0.0 || signal_phi >= 1.0) {
        throw ConfigError("signal_phi must lie in [0, 1)");
    }
    if (noise_scale <= 0.0) {
        throw ConfigError("noise_scale must be positive");
    }
}

PricePanel make_synthetic_panel(const SynthParams& params) {
    params.validate();

    const int n_days = params.n_years * 252;
    std::vector<Date> days;
    days.reserve(static_cast<std::size_t>(n_days));
    Date d = params.start_date;
    if (d.weekday() >= 5) d = d.next_weekday();
    for (int i = 0; i < n_days; ++i) {
        days.push_back(d);
        d = d.next_weekday();
    }

    std::vector<std::string> tickers;
    tickers.reserve(static_cast<std::size_t>(params.n_stocks));
    for (int s = 0; s < params.n_stocks; ++s) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "S%04d", s);
        tickers.emplace_back(buf);
    }

    PricePanel panel{TradingCalendar(std::move(days)), std::move(tickers)};
    for (int s = 0; s < params.n_stocks; ++s) {
        Rng rng(params.seed, "synth", static_cast<uint64_t>(s));
        double open = rng.uniform(50.0, 150.0);
        double intraday_prev = 0.0;
        for (int t = 0; t < n_days; ++t) {
            double x = params.signal_phi * intraday_prev + rng.normal(0.0, params.noise_scale);
            x = std::clamp(x, -0.5, 0.5);  // keeps prices positive under any noise_scale
            const double close = open * (1.0 + x);
            const double volume = 1000.0 + std::floor(rng.uniform() * 9000.0);
            panel.set_cell(t, s, open, close, volume);
            intraday_prev = x;
            const double overnight = std::clamp(rng.normal(0.0, params.noise_scale / 2.0), -0.5, 0.5);
            open = close * (1.0 + overnight);
        }
    }
    return panel;
}

}  // namespace intraday
