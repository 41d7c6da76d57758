// run.hpp — pipeline orchestration behind the CLI subcommands: ingest,
// backtest, artifact writing, report re-slicing, feature dumps.
#pragma once

#include <optional>
#include <string>

#include "intraday/backtest.hpp"
#include "intraday/metrics.hpp"
#include "intraday/synth.hpp"
#include "intraday/threads.hpp"

namespace intraday {

struct RunConfig {
    std::string panel_path;
    std::string membership_path;  // empty = treat every ticker as a member
    ClassifierSpec model;
    StrategyConfig strategy;
    PeriodParams periods;
    std::string start_date;  // optional ISO date filters (inclusive)
    std::string end_date;
    std::string out_dir{"."};

    void validate() const;
};

// Writes returns.csv, legs.csv, report.json/report.csv (net),
// report_gross.json/report_gross.csv, timing.json, wealth.csv,
// rolling_mean.csv, rolling_sharpe.csv into out_dir.
BacktestOutput run_backtest_command(const RunConfig& config);

// Re-slices a saved returns.csv by [start, end] and recomputes both reports
// into out_dir. Leg means come from legs.csv when present next to the
// returns file.
void run_report_command(const std::string& returns_path, const std::string& start_date,
                        const std::string& end_date, const std::string& out_dir);

void run_synth_command(const SynthParams& params, const std::string& out_path);

// Forest feature dump: ticker,date,ir_1,...,or_240 rows for every (stock,
// day) with a complete feature window inside the date filter.
void run_dump_features_command(const std::string& panel_path, const std::string& start_date,
                               const std::string& end_date, const std::string& out_path);

// Shared helpers (also used by tests).
ReturnSeries load_return_series(const std::string& returns_path);
void write_return_series(const ReturnSeries& series, const std::string& returns_path,
                         const std::string& legs_path);
void write_report_files(const MetricsReport& report, const std::string& json_path,
                        const std::string& csv_path);

}  // namespace intraday
