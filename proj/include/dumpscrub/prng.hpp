#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace dumpscrub {

// Deterministic draw helpers on top of mt19937_64. The standard distribution
// classes are implementation-defined, so anything that must be reproducible
// byte for byte across builds draws through these instead.
struct Prng {
    std::mt19937_64 engine;

    explicit Prng(uint64_t seed) : engine(seed) {}

    uint64_t next() { return engine(); }

    // Uniform-ish value in [0, n). Modulo bias is irrelevant at the n used here.
    uint64_t below(uint64_t n) { return n ? engine() % n : 0; }

    // Inclusive range.
    int64_t range(int64_t lo, int64_t hi) {
        return lo + static_cast<int64_t>(below(static_cast<uint64_t>(hi - lo + 1)));
    }

    double unit() { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[below(i)]);
    }
};

} // namespace dumpscrub
