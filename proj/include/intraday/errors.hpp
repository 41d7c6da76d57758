// errors.hpp
#pragma once

#include <stdexcept>
#include <string>

namespace intraday {

// Base for every domain error thrown by the library. CLI maps these to exit
// codes: validation errors (bad input/config) -> 1, runtime failures -> 2.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad configuration, parameters, or input shape known before any compute.
struct ConfigError : Error {
    using Error::Error;
};

struct IndexOutOfRangeError : Error {
    using Error::Error;
};
struct MissingDataError : Error {
    using Error::Error;
};

// market_data
struct MalformedRowError : Error {
    using Error::Error;
};
struct DuplicateObservationError : Error {
    using Error::Error;
};
struct NonPositivePriceError : Error {
    using Error::Error;
};

// study_periods
struct CalendarTooShortError : Error {
    using Error::Error;
};

// features
struct InsufficientDataError : Error {
    using Error::Error;
};

// labels / dataset
struct EmptyUniverseError : Error {
    using Error::Error;
};

// models
struct EmptyTrainingSetError : Error {
    using Error::Error;
};
struct NonFiniteLossError : Error {
    using Error::Error;
};
struct ShapeMismatchError : Error {
    using Error::Error;
};
struct NoValidSplitError : Error {
    using Error::Error;
};

// backtest
struct NoTradableStocksError : Error {
    using Error::Error;
};

// metrics
struct SeriesTooShortError : Error {
    using Error::Error;
};
struct ZeroVolatilityError : Error {
    using Error::Error;
};
struct ZeroDownsideError : Error {
    using Error::Error;
};

}  // namespace intraday
