#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace spf {

// Deterministic splittable RNG (splitmix64 core). A stream is identified by
// the master seed and a label; labeled splitting keeps parallel and
// sequential runs byte-identical, independent of the platform's <random>.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed ^ kGolden) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += kGolden);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, bound). bound > 0.
    std::uint64_t below(std::uint64_t bound) {
        // rejection sampling keeps the distribution exact
        std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            std::uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

    // Uniform in [lo, hi] inclusive.
    std::int64_t range(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    // Derives an independent stream for a subtask.
    Rng split(std::string_view label) const {
        std::uint64_t h = state_;
        for (char c : label) {
            h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
            h *= 0x100000001b3ull;
        }
        return Rng(h);
    }

    Rng split(std::string_view label, std::uint64_t index) const {
        return split(std::string(label) + "#" + std::to_string(index));
    }

private:
    static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;
    std::uint64_t state_;
};

}  // namespace spf
