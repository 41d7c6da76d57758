// intraday_alpha — walk-forward intraday long-short backtesting CLI.
//
// Subcommands: backtest, report, synth, dump-features. Every backtest flag
// can also come from a flat key=value config file via --config; flags on the
// command line override the file. Exit codes: 0 success, 1 validation error,
// 2 runtime failure.
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "intraday/run.hpp"

namespace {

int run(int argc, char** argv) {
    CLI::App app{"Walk-forward intraday long-short backtesting engine"};
    app.require_subcommand(1);

    intraday::RunConfig config;
    std::string model_name = "forest";

    CLI::App* backtest = app.add_subcommand("backtest", "Run the full pipeline and write artifacts");
    backtest->set_config("--config", "", "Flat key=value config file; flags override it");
    backtest->add_option("--panel", config.panel_path, "Input panel CSV (date,ticker,open,close_adj,volume)")
        ->configurable(true);
    backtest->add_option("--membership", config.membership_path,
                         "Optional membership CSV (ticker,start_date,end_date)");
    backtest->add_option("--model", model_name, "Classifier: forest or lstm")
        ->check(CLI::IsMember({"forest", "lstm"}));
    backtest->add_option("--seed", config.model.seed, "Run seed; all randomness derives from it");
    backtest->add_option("--out", config.out_dir, "Output directory");
    backtest->add_option("--start", config.start_date, "Restrict the panel to dates >= this");
    backtest->add_option("--end", config.end_date, "Restrict the panel to dates <= this");
    backtest->add_option("--window-days", config.periods.window_days, "Study-period length");
    backtest->add_option("--stride-days", config.periods.stride_days, "Offset between period starts");
    backtest->add_option("--train-days", config.periods.train_days, "Training days per period");
    backtest->add_option("--k", config.strategy.k, "Stocks per leg");
    backtest->add_option("--cost-per-halfturn", config.strategy.cost_per_halfturn,
                         "Slippage per half-turn (daily cost = 4x)");
    backtest->add_flag("--skip-degenerate-days", config.strategy.skip_degenerate_days,
                       "Skip days where every probability ties");
    backtest->add_option("--n-trees", config.model.forest.n_trees, "Forest size");
    backtest->add_option("--max-depth", config.model.forest.max_depth, "Tree depth cap");
    backtest->add_option("--features-per-split", config.model.forest.features_per_split,
                         "Candidate features per split; 0 = floor(sqrt(p))");
    backtest->add_option("--hidden-units", config.model.lstm.hidden_units, "LSTM cells");
    backtest->add_option("--dropout", config.model.lstm.dropout_rate, "Dropout after the LSTM layer");
    backtest->add_option("--learning-rate", config.model.lstm.learning_rate, "RMSProp learning rate");
    backtest->add_option("--batch-size", config.model.lstm.batch_size, "Minibatch size");
    backtest->add_option("--patience", config.model.lstm.early_stop_patience,
                         "Early-stopping patience (epochs)");
    backtest->add_option("--validation-fraction", config.model.lstm.validation_fraction,
                         "Chronological tail held out for validation");
    backtest->add_option("--max-epochs", config.model.lstm.max_epochs, "Epoch cap");

    std::string returns_path;
    std::string report_start, report_end, report_out = ".";
    CLI::App* report = app.add_subcommand("report", "Recompute metrics from a saved returns.csv");
    report->add_option("--returns", returns_path, "Path to returns.csv")->required();
    report->add_option("--start", report_start, "Keep dates >= this");
    report->add_option("--end", report_end, "Keep dates <= this");
    report->add_option("--out", report_out, "Output directory");

    intraday::SynthParams synth_params;
    std::string synth_out = "panel.csv";
    CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic panel");
    synth->add_option("--stocks", synth_params.n_stocks, "Number of stocks");
    synth->add_option("--years", synth_params.n_years, "Years of 252 weekdays");
    synth->add_option("--phi", synth_params.signal_phi, "Signal strength in [0,1); 0 = no skill");
    synth->add_option("--noise", synth_params.noise_scale, "Innovation stddev");
    synth->add_option("--seed", synth_params.seed, "Generator seed");
    synth->add_option("--out", synth_out, "Output panel path");

    std::string dump_panel, dump_start, dump_end, dump_out = "features.csv";
    CLI::App* dump = app.add_subcommand("dump-features", "Write forest feature rows to CSV");
    dump->add_option("--panel", dump_panel, "Input panel CSV")->required();
    dump->add_option("--start", dump_start, "Keep dates >= this");
    dump->add_option("--end", dump_end, "Keep dates <= this");
    dump->add_option("--out", dump_out, "Output CSV path");

    CLI11_PARSE(app, argc, argv);

    if (backtest->parsed()) {
        config.model.kind = model_name == "forest" ? intraday::ModelKind::forest : intraday::ModelKind::lstm;
        config.strategy.daily_total_cost = 4.0 * config.strategy.cost_per_halfturn;
        config.validate();  // ConfigError (exit 1) before any compute
        intraday::run_backtest_command(config);
        std::cout << "backtest artifacts written to " << config.out_dir << "\n";
    } else if (report->parsed()) {
        intraday::run_report_command(returns_path, report_start, report_end, report_out);
        std::cout << "report written to " << report_out << "\n";
    } else if (synth->parsed()) {
        intraday::run_synth_command(synth_params, synth_out);
        std::cout << "synthetic panel written to " << synth_out << "\n";
    } else if (dump->parsed()) {
        intraday::run_dump_features_command(dump_panel, dump_start, dump_end, dump_out);
        std::cout << "features written to " << dump_out << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const intraday::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const intraday::SeriesTooShortError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const intraday::CalendarTooShortError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 2;
    }
}
