// threads.hpp
#pragma once

namespace intraday {

// Worker-thread budget: INTRADAY_ALPHA_THREADS when set (>= 1), else
// hardware concurrency, at least 1.
int thread_cap();

}  // namespace intraday
