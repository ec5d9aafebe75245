#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <utility>

namespace jobshop {

// 64-bit Mersenne Twister (std::mt19937_64, whose output sequence is fixed
// by the standard) with distribution code written out here, so that draws
// are identical on every standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform integer in [lo, hi], by rejection sampling.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        if (span == 0) return static_cast<std::int64_t>(next());
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % span;
        std::uint64_t x = next();
        while (x >= limit) x = next();
        return lo + static_cast<std::int64_t>(x % span);
    }

    // Uniform index in [0, n).
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(n) - 1)); }

    // Fisher-Yates, drawing from the back.
    template <typename T>
    void shuffle(std::span<T> values) {
        for (std::size_t i = values.size(); i > 1; --i) std::swap(values[i - 1], values[index(i)]);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace jobshop
