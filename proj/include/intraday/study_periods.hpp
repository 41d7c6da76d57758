// study_periods.hpp — walk-forward folds: 4-year windows, 1-year stride.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "intraday/dates.hpp"
#include "intraday/panel.hpp"

namespace intraday {

struct StudyPeriod {
    int index{0};
    IndexRange full_range;   // [start, start + window)
    IndexRange train_range;  // first train_days of full_range
    IndexRange trade_range;  // remainder
    std::vector<int> universe;  // panel stock indices, ascending (== ticker order)
};

struct PeriodParams {
    int window_days{1008};
    int stride_days{252};
    int train_days{756};
};

// Index-membership intervals (inclusive date ranges). An empty table means
// "no membership information"; callers treat every ticker as a member.
class ConstituencyTable {
public:
    ConstituencyTable() = default;

    void add(const std::string& ticker, Date start, Date end);
    bool is_member(const std::string& ticker, const Date& on) const;
    bool empty() const { return spans_.empty(); }

    // CSV schema: ticker,start_date,end_date (inclusive).
    static ConstituencyTable load_csv(const std::string& path);

private:
    struct Span {
        std::string ticker;
        Date start, end;
    };
    std::vector<Span> spans_;
};

// Periods start at offsets 0, stride, 2*stride, ...; every period is
// window_days long except possibly the last, which is kept only while its
// trade part has at least one day.
std::vector<StudyPeriod> generate_periods(const TradingCalendar& calendar,
                                          const PeriodParams& params = {});

// Stocks that are members on the last training day and have complete history
// over the period's full range. Universes are not filled in by
// generate_periods; call this per period.
std::vector<int> build_universe(const PricePanel& panel, const StudyPeriod& period,
                                const ConstituencyTable& membership = {});

}  // namespace intraday
