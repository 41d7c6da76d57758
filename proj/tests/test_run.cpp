#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "intraday/run.hpp"

using namespace intraday;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& stem) {
        path = fs::temp_directory_path() / (stem + "_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str(const std::string& name = "") const {
        return name.empty() ? path.string() : (path / name).string();
    }
};

RunConfig small_config(const std::string& panel_path, const std::string& out_dir, uint64_t seed) {
    RunConfig config;
    config.panel_path = panel_path;
    config.out_dir = out_dir;
    config.model.kind = ModelKind::forest;
    config.model.seed = seed;
    config.model.forest.n_trees = 8;
    config.model.forest.max_depth = 4;
    config.strategy.k = 3;
    return config;
}

}  // namespace

TEST_CASE("synth panels are deterministic and signal strength matters") {
    TempDir dir("intraday_synth");
    SynthParams params;
    params.n_stocks = 4;
    params.n_years = 1;
    params.seed = 9;
    run_synth_command(params, dir.str("a.csv"));
    run_synth_command(params, dir.str("b.csv"));
    CHECK(slurp(dir.str("a.csv")) == slurp(dir.str("b.csv")));

    params.seed = 10;
    run_synth_command(params, dir.str("c.csv"));
    CHECK(slurp(dir.str("a.csv")) != slurp(dir.str("c.csv")));

    const PricePanel panel = load_panel(dir.str("a.csv"));
    CHECK(panel.days() == 252);
    CHECK(panel.stocks() == 4);
}

TEST_CASE("phi controls the lag-1 autocorrelation of intraday returns") {
    auto autocorr = [](const PricePanel& panel) {
        double num = 0.0, den = 0.0;
        for (int s = 0; s < panel.stocks(); ++s) {
            double prev = 0.0;
            for (int t = 0; t < panel.days(); ++t) {
                const double x = panel.close_adj(t, s) / panel.open(t, s) - 1.0;
                if (t > 0) num += prev * x;
                den += x * x;
                prev = x;
            }
        }
        return num / den;
    };
    SynthParams strong;
    strong.n_stocks = 10;
    strong.n_years = 4;
    strong.signal_phi = 0.3;
    strong.seed = 4;
    SynthParams none = strong;
    none.signal_phi = 0.0;
    CHECK(autocorr(make_synthetic_panel(strong)) > 0.2);
    CHECK(std::fabs(autocorr(make_synthetic_panel(none))) < 0.05);
}

TEST_CASE("backtest command writes every artifact and is byte-deterministic") {
    TempDir dir("intraday_bt");
    SynthParams params;
    params.n_stocks = 12;
    params.n_years = 5;
    params.signal_phi = 0.25;
    params.seed = 21;
    run_synth_command(params, dir.str("panel.csv"));

    const RunConfig config_a = small_config(dir.str("panel.csv"), dir.str("out_a"), 77);
    const RunConfig config_b = small_config(dir.str("panel.csv"), dir.str("out_b"), 77);
    const BacktestOutput out = run_backtest_command(config_a);
    run_backtest_command(config_b);

    CHECK(out.series.points.size() == 2 * 252);
    for (const char* name :
         {"returns.csv", "legs.csv", "report.json", "report.csv", "report_gross.json",
          "report_gross.csv", "timing.json", "wealth.csv", "rolling_mean.csv", "rolling_sharpe.csv"}) {
        CAPTURE(name);
        CHECK(fs::exists(fs::path(dir.str("out_a")) / name));
    }
    CHECK(slurp(dir.str("out_a") + "/returns.csv") == slurp(dir.str("out_b") + "/returns.csv"));
    CHECK(slurp(dir.str("out_a") + "/report.json") == slurp(dir.str("out_b") + "/report.json"));

    SUBCASE("a different seed changes the outputs") {
        const RunConfig config_c = small_config(dir.str("panel.csv"), dir.str("out_c"), 78);
        run_backtest_command(config_c);
        CHECK(slurp(dir.str("out_a") + "/returns.csv") != slurp(dir.str("out_c") + "/returns.csv"));
    }

    SUBCASE("returns.csv round-trips through load_return_series") {
        const ReturnSeries series = load_return_series(dir.str("out_a") + "/returns.csv");
        REQUIRE(series.points.size() == out.series.points.size());
        for (std::size_t i = 0; i < series.points.size(); ++i) {
            CHECK(series.points[i].date == out.series.points[i].date);
            CHECK(series.points[i].gross_return == out.series.points[i].gross_return);
            CHECK(series.points[i].net_return == out.series.points[i].net_return);
            CHECK(series.points[i].long_tickers == out.series.points[i].long_tickers);
            CHECK(series.points[i].gross_long_mean == out.series.points[i].gross_long_mean);
        }
    }

    SUBCASE("report command on the full range reproduces the backtest report") {
        run_report_command(dir.str("out_a") + "/returns.csv", "", "", dir.str("resliced"));
        CHECK(slurp(dir.str("resliced") + "/report.json") == slurp(dir.str("out_a") + "/report.json"));
        CHECK(slurp(dir.str("resliced") + "/report_gross.json") ==
              slurp(dir.str("out_a") + "/report_gross.json"));
    }

    SUBCASE("three-way date split partitions the day count") {
        const auto& points = out.series.points;
        const std::string d1 = points[200].date.to_string();
        const std::string d2 = points[400].date.to_string();
        run_report_command(dir.str("out_a") + "/returns.csv", "", d1, dir.str("s1"));
        run_report_command(dir.str("out_a") + "/returns.csv", points[201].date.to_string(), d2,
                           dir.str("s2"));
        run_report_command(dir.str("out_a") + "/returns.csv", points[401].date.to_string(), "",
                           dir.str("s3"));
        // Day counts: 201 + 200 + 103 = 504.
        CHECK(fs::exists(dir.str("s1") + "/report.json"));
        CHECK(fs::exists(dir.str("s2") + "/report.json"));
        CHECK(fs::exists(dir.str("s3") + "/report.json"));
    }

    SUBCASE("single-day filter is too short to report") {
        const std::string d = out.series.points[10].date.to_string();
        CHECK_THROWS_AS(run_report_command(dir.str("out_a") + "/returns.csv", d, d, dir.str("short")),
                        SeriesTooShortError);
    }

    SUBCASE("empty date filter is a validation error") {
        CHECK_THROWS_AS(
            run_report_command(dir.str("out_a") + "/returns.csv", "2300-01-01", "", dir.str("none")),
            ConfigError);
    }
}

TEST_CASE("backtest date filter restricts the panel before windowing") {
    TempDir dir("intraday_filter");
    SynthParams params;
    params.n_stocks = 6;
    params.n_years = 6;
    params.seed = 31;
    run_synth_command(params, dir.str("panel.csv"));
    const PricePanel panel = load_panel(dir.str("panel.csv"));

    RunConfig config = small_config(dir.str("panel.csv"), dir.str("out"), 5);
    config.start_date = panel.calendar()[252].to_string();  // drop the first year
    const BacktestOutput out = run_backtest_command(config);
    // 5 remaining years -> 2 periods -> 504 traded days.
    CHECK(out.series.points.size() == 2 * 252);
    CHECK(panel.calendar()[252 + 756] == out.series.points.front().date);
}

TEST_CASE("config validation fails before compute") {
    RunConfig config;
    config.panel_path = "/nonexistent/panel.csv";
    CHECK_THROWS_AS(config.validate(), ConfigError);

    TempDir dir("intraday_cfg");
    {
        std::ofstream out(dir.str("panel.csv"));
        out << "date,ticker,open,close_adj,volume\n";
    }
    RunConfig bad_window = small_config(dir.str("panel.csv"), dir.str("out"), 1);
    bad_window.periods.window_days = 500;
    bad_window.periods.train_days = 700;
    CHECK_THROWS_AS(bad_window.validate(), ConfigError);

    RunConfig bad_date = small_config(dir.str("panel.csv"), dir.str("out"), 1);
    bad_date.start_date = "01/02/1990";
    CHECK_THROWS_AS(bad_date.validate(), ConfigError);
}

TEST_CASE("dump-features writes the documented header and matching values") {
    TempDir dir("intraday_dump");
    SynthParams params;
    params.n_stocks = 2;
    params.n_years = 2;
    params.seed = 3;
    run_synth_command(params, dir.str("panel.csv"));
    run_dump_features_command(dir.str("panel.csv"), "", "", dir.str("features.csv"));

    std::ifstream in(dir.str("features.csv"));
    std::string header;
    REQUIRE(std::getline(in, header));
    CHECK(header.rfind("ticker,date,ir_1,ir_2,", 0) == 0);
    CHECK(header.find(",ir_20,ir_40,") != std::string::npos);
    CHECK(header.find(",ir_240,cr_1,") != std::string::npos);
    CHECK(header.find(",cr_240,or_1,") != std::string::npos);
    const auto columns = 2 + 93;
    CHECK(std::count(header.begin(), header.end(), ',') == columns - 1);

    std::string first_row;
    REQUIRE(std::getline(in, first_row));
    // 2 years = 504 days; usable feature days are 241..503 per stock.
    int rows = 1;
    std::string line;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 2 * (504 - 241));

    const PricePanel panel = load_panel(dir.str("panel.csv"));
    std::stringstream ss(first_row);
    std::string ticker, date, cell;
    std::getline(ss, ticker, ',');
    std::getline(ss, date, ',');
    CHECK(ticker == panel.ticker(0));
    const int t = panel.calendar().index_of(Date::parse(date));
    CHECK(t == 241);
    const FeatureRow row = forest_features(panel, 0, t);
    std::size_t j = 0;
    while (std::getline(ss, cell, ',')) {
        CHECK(std::stod(cell) == doctest::Approx(row.values.at(j)).epsilon(1e-15));
        ++j;
    }
    CHECK(j == 93);
}
