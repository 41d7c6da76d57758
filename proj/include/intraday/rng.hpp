// rng.hpp — seeded, named substreams for reproducible runs.
//
// Every random draw in a run descends from the single run seed through a
// (label, index) substream. Distributions are hand-rolled on top of
// std::mt19937_64 so that draws are bit-identical across standard libraries
// (std::*_distribution is implementation-defined).
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace intraday {

uint64_t splitmix64(uint64_t x);

// Stable 64-bit mix of (seed, label, index).
uint64_t derive_seed(uint64_t base_seed, std::string_view label, uint64_t index = 0);

class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}
    Rng(uint64_t base_seed, std::string_view label, uint64_t index = 0)
        : engine_(derive_seed(base_seed, label, index)) {}

    uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n); n > 0.
    uint64_t uniform_index(uint64_t n) { return next_u64() % n; }

    // Standard normal via Box-Muller (one value per pair; cached partner).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    bool bernoulli(double p) { return uniform() < p; }

    // Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(uniform_index(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
    bool have_spare_{false};
    double spare_{0.0};
};

}  // namespace intraday
