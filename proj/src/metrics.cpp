#include "intraday/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "intraday/features.hpp"

namespace intraday {

double mean(const std::vector<double>& values) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return values.empty() ? 0.0 : sum / static_cast<double>(values.size());
}

double sample_std(const std::vector<double>& values) {
    const std::size_t n = values.size();
    if (n < 2) {
        throw SeriesTooShortError("standard deviation needs at least 2 observations");
    }
    bool constant = true;
    for (double v : values) constant = constant && v == values.front();
    if (constant) return 0.0;  // exact, not mean-rounding dust
    const double mu = mean(values);
    double ss = 0.0;
    for (double v : values) ss += (v - mu) * (v - mu);
    return std::sqrt(ss / static_cast<double>(n - 1));
}

double historical_var(const std::vector<double>& returns, double alpha) {
    if (returns.empty()) {
        throw SeriesTooShortError("VaR of an empty series");
    }
    if (alpha <= 0.0 || alpha >= 1.0) {
        throw Error("alpha must lie in (0, 1)");
    }
    return quantile_type7(returns, alpha);
}

double historical_cvar(const std::vector<double>& returns, double alpha) {
    const double var = historical_var(returns, alpha);
    double sum = 0.0;
    std::size_t count = 0;
    for (double r : returns) {
        if (r <= var) {
            sum += r;
            ++count;
        }
    }
    return sum / static_cast<double>(count);  // tail is non-empty: min <= var
}

double max_drawdown(const std::vector<double>& returns) {
    double wealth = 1.0;
    double peak = 1.0;
    double worst = 0.0;
    for (double r : returns) {
        wealth *= 1.0 + r;
        peak = std::max(peak, wealth);
        worst = std::max(worst, 1.0 - wealth / peak);
    }
    return worst;
}

AnnualizedStats annualized_stats(const std::vector<double>& returns, double periods_per_year) {
    const std::size_t n = returns.size();
    if (n < 2) {
        throw SeriesTooShortError("annualized stats need at least 2 observations");
    }
    AnnualizedStats out;
    double growth = 1.0;
    double downside_ss = 0.0;
    for (double r : returns) {
        growth *= 1.0 + r;
        const double shortfall = std::min(r, 0.0);
        downside_ss += shortfall * shortfall;
    }
    out.ann_return = std::pow(growth, periods_per_year / static_cast<double>(n)) - 1.0;
    out.ann_std = sample_std(returns) * std::sqrt(periods_per_year);
    out.ann_downside_dev =
        std::sqrt(downside_ss / static_cast<double>(n)) * std::sqrt(periods_per_year);
    return out;
}

double sharpe_ratio(const std::vector<double>& returns, double periods_per_year,
                    double risk_free_daily) {
    const double sd = sample_std(returns);
    if (sd == 0.0) {
        throw ZeroVolatilityError("sharpe ratio of a constant series");
    }
    return (mean(returns) - risk_free_daily) / sd * std::sqrt(periods_per_year);
}

double sortino_ratio(const std::vector<double>& returns, double periods_per_year, double target) {
    if (returns.empty()) {
        throw SeriesTooShortError("sortino ratio of an empty series");
    }
    double downside_ss = 0.0;
    for (double r : returns) {
        const double shortfall = std::min(r - target, 0.0);
        downside_ss += shortfall * shortfall;
    }
    if (downside_ss == 0.0) {
        throw ZeroDownsideError("no returns below target; sortino undefined");
    }
    const double downside = std::sqrt(downside_ss / static_cast<double>(returns.size()));
    return (mean(returns) - target) / downside * std::sqrt(periods_per_year);
}

namespace {

// Bias-corrected sample skewness (Fisher-Pearson G1).
double skewness_g1(const std::vector<double>& values) {
    const double n = static_cast<double>(values.size());
    const double mu = mean(values);
    double m2 = 0.0, m3 = 0.0;
    for (double v : values) {
        const double d = v - mu;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= n;
    m3 /= n;
    if (m2 == 0.0) return 0.0;
    const double g1 = m3 / std::pow(m2, 1.5);
    if (values.size() < 3) return g1;
    return g1 * std::sqrt(n * (n - 1.0)) / (n - 2.0);
}

// Bias-corrected excess kurtosis (G2).
double kurtosis_g2(const std::vector<double>& values) {
    const double n = static_cast<double>(values.size());
    const double mu = mean(values);
    double m2 = 0.0, m4 = 0.0;
    for (double v : values) {
        const double d = v - mu;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m4 /= n;
    if (m2 == 0.0) return 0.0;
    const double g2 = m4 / (m2 * m2) - 3.0;
    if (values.size() < 4) return g2;
    return ((n + 1.0) * g2 + 6.0) * (n - 1.0) / ((n - 2.0) * (n - 3.0));
}

}  // namespace

MetricsReport compute_report(const std::vector<double>& returns, const std::vector<double>& long_leg,
                             const std::vector<double>& short_leg, double periods_per_year) {
    if (returns.size() < 2) {
        throw SeriesTooShortError("report needs at least 2 returns, got " +
                                  std::to_string(returns.size()));
    }
    MetricsReport r;
    r.mean_long = long_leg.empty() ? 0.0 : mean(long_leg);
    r.mean_short = short_leg.empty() ? 0.0 : mean(short_leg);
    r.mean_return = mean(returns);
    r.std_dev = sample_std(returns);
    r.standard_error = r.std_dev / std::sqrt(static_cast<double>(returns.size()));
    r.minimum = *std::min_element(returns.begin(), returns.end());
    r.maximum = *std::max_element(returns.begin(), returns.end());
    r.q1 = quantile_type7(returns, 0.25);
    r.median = quantile_type7(returns, 0.50);
    r.q3 = quantile_type7(returns, 0.75);
    std::size_t positive = 0;
    for (double x : returns) positive += x > 0.0 ? 1 : 0;
    r.share_positive = static_cast<double>(positive) / static_cast<double>(returns.size());
    r.skewness = skewness_g1(returns);
    r.kurtosis = kurtosis_g2(returns);
    r.var_1pct = historical_var(returns, 0.01);
    r.cvar_1pct = historical_cvar(returns, 0.01);
    r.var_5pct = historical_var(returns, 0.05);
    r.cvar_5pct = historical_cvar(returns, 0.05);
    r.max_drawdown = max_drawdown(returns);
    const AnnualizedStats ann = annualized_stats(returns, periods_per_year);
    r.ann_return = ann.ann_return;
    r.ann_return_arithmetic = std::pow(1.0 + r.mean_return, periods_per_year) - 1.0;
    r.ann_std = ann.ann_std;
    r.ann_downside_dev = ann.ann_downside_dev;
    r.sharpe = r.std_dev == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                                : sharpe_ratio(returns, periods_per_year);
    try {
        r.sortino = sortino_ratio(returns, periods_per_year);
    } catch (const ZeroDownsideError&) {
        r.sortino = std::numeric_limits<double>::quiet_NaN();
    }
    return r;
}

std::vector<std::pair<std::string, double>> report_fields(const MetricsReport& r) {
    return {{"mean_long", r.mean_long},
            {"mean_short", r.mean_short},
            {"mean_return", r.mean_return},
            {"standard_error", r.standard_error},
            {"minimum", r.minimum},
            {"q1", r.q1},
            {"median", r.median},
            {"q3", r.q3},
            {"maximum", r.maximum},
            {"share_positive", r.share_positive},
            {"std_dev", r.std_dev},
            {"skewness", r.skewness},
            {"kurtosis", r.kurtosis},
            {"var_1pct", r.var_1pct},
            {"cvar_1pct", r.cvar_1pct},
            {"var_5pct", r.var_5pct},
            {"cvar_5pct", r.cvar_5pct},
            {"max_drawdown", r.max_drawdown},
            {"ann_return", r.ann_return},
            {"ann_return_arithmetic", r.ann_return_arithmetic},
            {"ann_std", r.ann_std},
            {"ann_downside_dev", r.ann_downside_dev},
            {"sharpe", r.sharpe},
            {"sortino", r.sortino}};
}

}  // namespace intraday
