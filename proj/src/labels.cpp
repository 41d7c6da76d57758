#include "intraday/labels.hpp"

#include <algorithm>

#include "intraday/features.hpp"

namespace intraday {

LabeledDay label_day(const PricePanel& panel, const std::vector<int>& universe, int t) {
    struct Entry {
        double ret;
        const std::string* ticker;
        int stock;
    };
    std::vector<Entry> entries;
    entries.reserve(universe.size());
    for (int s : universe) {
        if (!panel.present(t, s)) continue;
        entries.push_back({intraday_return(panel, s, t, 0), &panel.ticker(s), s});
    }
    if (entries.empty()) {
        throw EmptyUniverseError("no labelable stocks at day " + std::to_string(t));
    }

    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.ret != b.ret) return a.ret < b.ret;
        return *a.ticker < *b.ticker;
    });

    LabeledDay day;
    day.day_index = t;
    const std::size_t n = entries.size();
    day.median_ir = (n % 2 == 1) ? entries[n / 2].ret
                                 : 0.5 * (entries[n / 2 - 1].ret + entries[n / 2].ret);
    for (std::size_t i = 0; i < n; ++i) {
        day.labels[entries[i].stock] = i < n / 2 ? 0 : 1;
    }
    return day;
}

}  // namespace intraday
