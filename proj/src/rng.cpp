#include "intraday/rng.hpp"

namespace intraday {

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

uint64_t derive_seed(uint64_t base_seed, std::string_view label, uint64_t index) {
    uint64_t h = splitmix64(base_seed);
    for (unsigned char c : label) {
        h = splitmix64(h ^ c);
    }
    return splitmix64(h ^ index);
}

}  // namespace intraday
