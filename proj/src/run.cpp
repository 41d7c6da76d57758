#include "intraday/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "intraday/dataset.hpp"
#include "intraday/features.hpp"

namespace intraday {

namespace fs = std::filesystem;
using nlohmann::json;

void RunConfig::validate() const {
    if (panel_path.empty() || !fs::exists(panel_path)) {
        throw ConfigError("panel file not found: '" + panel_path + "'");
    }
    if (!membership_path.empty() && !fs::exists(membership_path)) {
        throw ConfigError("membership file not found: '" + membership_path + "'");
    }
    if (periods.window_days <= periods.train_days) {
        throw ConfigError("window_days must exceed train_days");
    }
    if (periods.stride_days < 1) {
        throw ConfigError("stride_days must be >= 1");
    }
    if (out_dir.empty()) {
        throw ConfigError("output directory must be set");
    }
    Date parsed;
    if (!start_date.empty() && !Date::try_parse(start_date, parsed)) {
        throw ConfigError("bad start date: '" + start_date + "'");
    }
    if (!end_date.empty() && !Date::try_parse(end_date, parsed)) {
        throw ConfigError("bad end date: '" + end_date + "'");
    }
    try {
        model.validate();
        strategy.validate();
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
}

namespace {

std::string join_tickers(const std::vector<std::string>& tickers) {
    std::string out;
    for (std::size_t i = 0; i < tickers.size(); ++i) {
        if (i) out += ';';
        out += tickers[i];
    }
    return out;
}

std::vector<std::string> split_tickers(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == ';') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

IndexRange filter_range(const TradingCalendar& calendar, const std::string& start,
                        const std::string& end) {
    int first = 0;
    int last = calendar.size();
    if (!start.empty()) first = calendar.lower_bound(Date::parse(start));
    if (!end.empty()) {
        const Date e = Date::parse(end);
        last = calendar.lower_bound(e);
        if (last < calendar.size() && calendar[last] == e) ++last;  // inclusive end
    }
    if (first >= last) {
        throw ConfigError("date filter [" + start + ", " + end + "] selects no days");
    }
    return {first, last};
}

void write_timing(const std::vector<PeriodTiming>& timing, const std::string& path) {
    json periods = json::array();
    double total_fit = 0.0;
    double decision_sum = 0.0;
    int decision_days = 0;
    for (const PeriodTiming& t : timing) {
        periods.push_back({{"period_index", t.period_index},
                           {"universe_size", t.universe_size},
                           {"trade_days", t.trade_days},
                           {"epochs_run", t.epochs_run},
                           {"fit_seconds", t.fit_seconds},
                           {"mean_epoch_seconds", t.mean_epoch_seconds},
                           {"decision_seconds_per_day", t.decision_seconds_per_day}});
        total_fit += t.fit_seconds;
        decision_sum += t.decision_seconds_per_day * t.trade_days;
        decision_days += t.trade_days;
    }
    json j{{"periods", periods},
           {"total_fit_seconds", total_fit},
           {"mean_decision_seconds_per_day", decision_days ? decision_sum / decision_days : 0.0}};
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << j.dump(2) << "\n";
}

void write_plot_series(const ReturnSeries& series, const std::string& out_dir, int window = 252) {
    {
        std::ofstream out(out_dir + "/wealth.csv");
        if (!out) throw Error("cannot write wealth.csv");
        out << "date,wealth_gross,wealth_net\n";
        double wg = 1.0, wn = 1.0;
        for (const auto& p : series.points) {
            wg *= 1.0 + p.gross_return;
            wn *= 1.0 + p.net_return;
            out << p.date.to_string() << ',' << format_double(wg) << ',' << format_double(wn) << '\n';
        }
    }
    const std::vector<double> nets = series.nets();
    {
        std::ofstream out(out_dir + "/rolling_mean.csv");
        if (!out) throw Error("cannot write rolling_mean.csv");
        out << "date,rolling_mean_net\n";
        double sum = 0.0;
        for (std::size_t i = 0; i < nets.size(); ++i) {
            sum += nets[i];
            if (i + 1 < static_cast<std::size_t>(window)) continue;
            if (i + 1 > static_cast<std::size_t>(window)) sum -= nets[i - static_cast<std::size_t>(window)];
            out << series.points[i].date.to_string() << ','
                << format_double(sum / static_cast<double>(window)) << '\n';
        }
    }
    {
        std::ofstream out(out_dir + "/rolling_sharpe.csv");
        if (!out) throw Error("cannot write rolling_sharpe.csv");
        out << "date,rolling_sharpe_net\n";
        for (std::size_t i = static_cast<std::size_t>(window); i <= nets.size(); ++i) {
            const std::vector<double> slice(nets.begin() + static_cast<std::ptrdiff_t>(i) - window,
                                            nets.begin() + static_cast<std::ptrdiff_t>(i));
            double value;
            try {
                value = sharpe_ratio(slice);
            } catch (const ZeroVolatilityError&) {
                value = std::numeric_limits<double>::quiet_NaN();
            }
            out << series.points[i - 1].date.to_string() << ',' << format_double(value) << '\n';
        }
    }
}

}  // namespace

void write_report_files(const MetricsReport& report, const std::string& json_path,
                        const std::string& csv_path) {
    json j = json::object();
    for (const auto& [name, value] : report_fields(report)) j[name] = value;
    std::ofstream jout(json_path);
    if (!jout) throw Error("cannot write " + json_path);
    jout << j.dump(2) << "\n";

    std::ofstream cout_(csv_path);
    if (!cout_) throw Error("cannot write " + csv_path);
    cout_ << "metric,value\n";
    for (const auto& [name, value] : report_fields(report)) {
        cout_ << name << ',' << format_double(value) << '\n';
    }
}

void write_return_series(const ReturnSeries& series, const std::string& returns_path,
                         const std::string& legs_path) {
    std::ofstream out(returns_path);
    if (!out) throw Error("cannot write " + returns_path);
    out << "date,gross_return,net_return,long_tickers,short_tickers\n";
    for (const auto& p : series.points) {
        out << p.date.to_string() << ',' << format_double(p.gross_return) << ','
            << format_double(p.net_return) << ',' << join_tickers(p.long_tickers) << ','
            << join_tickers(p.short_tickers) << '\n';
    }
    if (legs_path.empty()) return;
    std::ofstream legs(legs_path);
    if (!legs) throw Error("cannot write " + legs_path);
    legs << "date,gross_long_mean,gross_short_mean\n";
    for (const auto& p : series.points) {
        legs << p.date.to_string() << ',' << format_double(p.gross_long_mean) << ','
             << format_double(p.gross_short_mean) << '\n';
    }
}

ReturnSeries load_return_series(const std::string& returns_path) {
    std::ifstream in(returns_path);
    if (!in) throw ConfigError("cannot open returns file: " + returns_path);
    ReturnSeries series;
    std::string line;
    if (!std::getline(in, line)) throw MalformedRowError(returns_path + ": empty file");
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        while (fields.size() < 5) fields.emplace_back();  // trailing empty ticker lists
        const std::string where = returns_path + ":" + std::to_string(line_no);
        if (fields.size() != 5) {
            throw MalformedRowError(where + ": expected 5 fields");
        }
        ReturnPoint p;
        try {
            p.date = Date::parse(fields[0]);
            p.gross_return = std::stod(fields[1]);
            p.net_return = std::stod(fields[2]);
        } catch (const std::exception&) {
            throw MalformedRowError(where + ": bad date or number");
        }
        p.long_tickers = split_tickers(fields[3]);
        p.short_tickers = split_tickers(fields[4]);
        series.points.push_back(std::move(p));
    }

    // legs.csv written alongside by the backtest; optional on re-slice.
    const fs::path legs = fs::path(returns_path).parent_path() / "legs.csv";
    if (fs::exists(legs)) {
        std::ifstream lin(legs.string());
        std::string lline;
        std::getline(lin, lline);  // header
        std::size_t i = 0;
        while (std::getline(lin, lline) && i < series.points.size()) {
            if (lline.empty()) continue;
            std::stringstream ss(lline);
            std::string date_s, long_s, short_s;
            std::getline(ss, date_s, ',');
            std::getline(ss, long_s, ',');
            std::getline(ss, short_s);
            if (Date::parse(date_s) == series.points[i].date) {
                series.points[i].gross_long_mean = std::stod(long_s);
                series.points[i].gross_short_mean = std::stod(short_s);
            }
            ++i;
        }
    } else {
        for (auto& p : series.points) {
            p.gross_long_mean = std::numeric_limits<double>::quiet_NaN();
            p.gross_short_mean = std::numeric_limits<double>::quiet_NaN();
        }
    }
    return series;
}

BacktestOutput run_backtest_command(const RunConfig& config) {
    config.validate();
    fs::create_directories(config.out_dir);

    PricePanel panel = load_panel(config.panel_path);
    if (!config.start_date.empty() || !config.end_date.empty()) {
        panel = panel.slice_days(filter_range(panel.calendar(), config.start_date, config.end_date));
    }

    ConstituencyTable membership;
    if (!config.membership_path.empty()) {
        membership = ConstituencyTable::load_csv(config.membership_path);
    }

    std::vector<StudyPeriod> periods = generate_periods(panel.calendar(), config.periods);
    for (StudyPeriod& period : periods) {
        period.universe = build_universe(panel, period, membership);
    }

    BacktestOutput output = run_backtest(panel, periods, config.model, config.strategy);

    const std::string dir = config.out_dir;
    write_return_series(output.series, dir + "/returns.csv", dir + "/legs.csv");

    const MetricsReport net_report = compute_report(output.series.nets(), output.series.long_means(),
                                                    output.series.short_means());
    write_report_files(net_report, dir + "/report.json", dir + "/report.csv");
    const MetricsReport gross_report = compute_report(
        output.series.grosses(), output.series.long_means(), output.series.short_means());
    write_report_files(gross_report, dir + "/report_gross.json", dir + "/report_gross.csv");

    write_timing(output.timing, dir + "/timing.json");
    write_plot_series(output.series, dir);
    return output;
}

void run_report_command(const std::string& returns_path, const std::string& start_date,
                        const std::string& end_date, const std::string& out_dir) {
    ReturnSeries series = load_return_series(returns_path);
    if (series.points.empty()) {
        throw ConfigError("returns file has no rows: " + returns_path);
    }
    if (!start_date.empty() || !end_date.empty()) {
        Date start{0, 1, 1}, end{9999, 12, 31};
        if (!start_date.empty()) start = Date::parse(start_date);
        if (!end_date.empty()) end = Date::parse(end_date);
        ReturnSeries filtered;
        for (auto& p : series.points) {
            if (!(p.date < start) && !(end < p.date)) filtered.points.push_back(std::move(p));
        }
        series = std::move(filtered);
    }
    if (series.points.empty()) {
        throw ConfigError("date filter selects no returns");
    }

    fs::create_directories(out_dir);
    const bool legs_known = !std::isnan(series.points.front().gross_long_mean);
    const std::vector<double> longs = legs_known ? series.long_means() : std::vector<double>{};
    const std::vector<double> shorts = legs_known ? series.short_means() : std::vector<double>{};

    MetricsReport net_report = compute_report(series.nets(), longs, shorts);
    MetricsReport gross_report = compute_report(series.grosses(), longs, shorts);
    if (!legs_known) {
        net_report.mean_long = net_report.mean_short = std::numeric_limits<double>::quiet_NaN();
        gross_report.mean_long = gross_report.mean_short = std::numeric_limits<double>::quiet_NaN();
    }
    write_report_files(net_report, out_dir + "/report.json", out_dir + "/report.csv");
    write_report_files(gross_report, out_dir + "/report_gross.json", out_dir + "/report_gross.csv");
}

void run_synth_command(const SynthParams& params, const std::string& out_path) {
    const PricePanel panel = make_synthetic_panel(params);
    save_panel(panel, out_path);
}

void run_dump_features_command(const std::string& panel_path, const std::string& start_date,
                               const std::string& end_date, const std::string& out_path) {
    PricePanel panel = load_panel(panel_path);
    if (!start_date.empty() || !end_date.empty()) {
        panel = panel.slice_days(filter_range(panel.calendar(), start_date, end_date));
    }

    std::ofstream out(out_path);
    if (!out) throw Error("cannot write " + out_path);
    out << "ticker,date";
    const LagSet& lags = standard_lags();
    for (const char* family : {"ir", "cr", "or"}) {
        for (int m : lags.lags()) out << ',' << family << '_' << m;
    }
    out << '\n';

    for (int s = 0; s < panel.stocks(); ++s) {
        for (int t = 0; t < panel.days(); ++t) {
            FeatureRow row;
            try {
                row = forest_features(panel, s, t, lags);
            } catch (const Error&) {
                continue;  // incomplete window
            }
            out << panel.ticker(s) << ',' << panel.calendar()[t].to_string();
            for (double v : row.values) out << ',' << format_double(v);
            out << '\n';
        }
    }
}

}  // namespace intraday
