// metrics.hpp — the daily-return performance report: location, dispersion,
// shape, tail risk, drawdown, and annualized risk-adjusted ratios.
#pragma once

#include <string>
#include <vector>

#include "intraday/errors.hpp"

namespace intraday {

struct MetricsReport {
    double mean_long{0}, mean_short{0}, mean_return{0};
    double standard_error{0};
    double minimum{0}, q1{0}, median{0}, q3{0}, maximum{0};
    double share_positive{0};
    double std_dev{0};   // sample standard deviation (n-1)
    double skewness{0};  // bias-corrected (Fisher-Pearson G1)
    double kurtosis{0};  // bias-corrected excess kurtosis (G2)
    double var_1pct{0}, cvar_1pct{0};
    double var_5pct{0}, cvar_5pct{0};
    double max_drawdown{0};
    double ann_return{0};             // geometric compounding
    double ann_return_arithmetic{0};  // (1 + mean)^ppy - 1
    double ann_std{0};
    double ann_downside_dev{0};
    double sharpe{0};
    double sortino{0};  // quiet NaN when no below-target returns exist
};

// Ordered (field name, value) view; report.json/report.csv write this.
std::vector<std::pair<std::string, double>> report_fields(const MetricsReport& report);

// `returns` drives everything except mean_long/mean_short, which average the
// per-leg series (empty legs leave them 0).
MetricsReport compute_report(const std::vector<double>& returns, const std::vector<double>& long_leg,
                             const std::vector<double>& short_leg, double periods_per_year = 252.0);

// Signed empirical alpha-quantile (linear interpolation); negative = loss.
double historical_var(const std::vector<double>& returns, double alpha);

// Mean of all returns <= historical_var(returns, alpha).
double historical_cvar(const std::vector<double>& returns, double alpha);

// Largest peak-to-trough decline of the compounded wealth curve W_t =
// prod(1 + r_i), W_0 = 1.
double max_drawdown(const std::vector<double>& returns);

struct AnnualizedStats {
    double ann_return{0};
    double ann_std{0};
    double ann_downside_dev{0};
};

AnnualizedStats annualized_stats(const std::vector<double>& returns, double periods_per_year = 252.0);

// (mean - risk_free_daily) / sample std * sqrt(periods_per_year).
double sharpe_ratio(const std::vector<double>& returns, double periods_per_year = 252.0,
                    double risk_free_daily = 0.0);

// (mean - target) / rms(below-target shortfall) * sqrt(periods_per_year).
// Throws ZeroDownsideError when no return falls below the target.
double sortino_ratio(const std::vector<double>& returns, double periods_per_year = 252.0,
                     double target = 0.0);

double mean(const std::vector<double>& values);
double sample_std(const std::vector<double>& values);  // n-1 denominator

}  // namespace intraday
