#pragma once

#include <cstdint>
#include <random>

namespace ulam {

// Uniform doubles are derived from the raw mt19937_64 stream instead of
// std::uniform_real_distribution, whose output is implementation-defined.
// This keeps seeded artifacts identical across standard libraries.

inline double uniform_unit(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline double uniform_in(std::mt19937_64& gen, double lo, double hi) {
    return lo + (hi - lo) * uniform_unit(gen);
}

} // namespace ulam
