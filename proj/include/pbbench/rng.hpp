#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace pbbench {

// Multiplicative congruential generator x <- 16807 x mod (2^31 - 1),
// advanced with Schrage's decomposition so every intermediate value fits in
// signed 32-bit arithmetic. The state stays in [1, 2^31 - 2] and the stream
// is identical on every platform, which is what makes whole experiments
// replayable from a single integer seed.
class Rng {
public:
    static constexpr std::int32_t modulus = 2147483647;  // 2^31 - 1, prime
    static constexpr std::int32_t multiplier = 16807;    // 7^5, primitive root mod 2^31-1

    // Seeds are reduced mod 2^31 - 1; 0 is remapped to 1 (fixed point of the
    // recurrence).
    explicit Rng(std::int64_t seed = 1) noexcept
        : state_(static_cast<std::int32_t>(((seed % modulus) + modulus) % modulus)) {
        if (state_ == 0) state_ = 1;
    }

    // Advances and returns the new state; never 0, never >= 2^31 - 1.
    std::int32_t next() noexcept {
        constexpr std::int32_t q = modulus / multiplier;  // 127773
        constexpr std::int32_t r = modulus % multiplier;  // 2836
        const std::int32_t hi = state_ / q;
        const std::int32_t lo = state_ % q;
        state_ = multiplier * lo - r * hi;
        if (state_ <= 0) state_ += modulus;
        return state_;
    }

    std::int32_t state() const noexcept { return state_; }

    // Uniform real in (0, 1); both endpoints are unreachable.
    double uniform01() noexcept {
        return static_cast<double>(next()) / static_cast<double>(modulus);
    }

    // Uniform integer in [0, k).
    std::int64_t below(std::int64_t k) {
        if (k < 1) throw std::invalid_argument("Rng::below: empty range");
        const auto v = static_cast<std::int64_t>(uniform01() * static_cast<double>(k));
        return v < k ? v : k - 1;
    }

    // Standard normal deviate via Box-Muller on two uniform draws. No state
    // is cached between calls.
    double normal() noexcept {
        const double u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::int32_t state_;
};

// Uniform permutation of {0, ..., n-1} by Fisher-Yates.
inline std::vector<int> random_permutation(Rng& rng, int n) {
    if (n < 1) throw std::invalid_argument("random_permutation: n must be positive");
    std::vector<int> p(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
    for (int i = n - 1; i > 0; --i) {
        const auto j = rng.below(i + 1);
        std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]);
    }
    return p;
}

}  // namespace pbbench
