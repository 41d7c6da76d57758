#include "intraday/threads.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

namespace intraday {

int thread_cap() {
    if (const char* env = std::getenv("INTRADAY_ALPHA_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) return cap;
    }
    return std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
}

}  // namespace intraday
