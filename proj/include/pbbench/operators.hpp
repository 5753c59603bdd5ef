#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pbbench/bitstring.hpp"
#include "pbbench/rng.hpp"

namespace pbbench {

// Exact binomial sample by inversion of the CDF; one uniform draw per sample.
// Mirrored for p > 1/2 so the zero-probability term never underflows for
// realistic n; degenerate dimensions fall back to counting Bernoulli trials.
inline int sample_binomial(Rng& rng, int n, double p) {
    if (n < 0 || p < 0.0 || p > 1.0) throw std::invalid_argument("sample_binomial: bad arguments");
    if (n == 0 || p == 0.0) return 0;
    if (p == 1.0) return n;
    const bool mirrored = p > 0.5;
    const double q = mirrored ? 1.0 - p : p;
    double pmf = std::pow(1.0 - q, n);
    if (pmf <= 0.0) {
        int k = 0;
        for (int i = 0; i < n; ++i) k += rng.uniform01() < q;
        return mirrored ? n - k : k;
    }
    const double u = rng.uniform01();
    const double ratio = q / (1.0 - q);
    double cdf = pmf;
    int k = 0;
    while (u > cdf && k < n) {
        pmf *= ratio * static_cast<double>(n - k) / static_cast<double>(k + 1);
        ++k;
        cdf += pmf;
    }
    return mirrored ? n - k : k;
}

// Bin(n, p) conditioned on a positive outcome: the distribution obtained by
// redrawing standard bit mutation until at least one bit flips. Sampled by
// inversion over the conditional CDF, which stays O(np) even when p is tiny.
inline int sample_binomial_gt0(Rng& rng, int n, double p) {
    if (n < 1) throw std::invalid_argument("sample_binomial_gt0: n must be positive");
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("sample_binomial_gt0: p must lie in (0, 1)");
    if (p > 0.5) {
        int k;
        do { k = sample_binomial(rng, n, p); } while (k == 0);  // P(0) < 2^-n
        return k;
    }
    double pmf = std::pow(1.0 - p, n);
    if (pmf <= 0.0) {
        int k;
        do { k = sample_binomial(rng, n, p); } while (k == 0);
        return k;
    }
    const double u = rng.uniform01();
    const double ratio = p / (1.0 - p);
    const double v = pmf + u * (1.0 - pmf);  // uniform over the mass above zero
    double cdf = pmf;
    int k = 0;
    while (v > cdf && k < n) {
        pmf *= ratio * static_cast<double>(n - k) / static_cast<double>(k + 1);
        ++k;
        cdf += pmf;
    }
    return k == 0 ? 1 : k;
}

// Mutation-strength distribution Pr[k] proportional to k^(-beta) on [1, n/2].
class PowerLawSampler {
public:
    PowerLawSampler(int n, double beta) {
        if (n < 2) throw std::invalid_argument("PowerLawSampler: n must be at least 2");
        if (beta <= 1.0) throw std::invalid_argument("PowerLawSampler: beta must exceed 1");
        cdf_.resize(static_cast<std::size_t>(n / 2));
        double acc = 0;
        for (std::size_t k = 0; k < cdf_.size(); ++k) {
            acc += std::pow(static_cast<double>(k + 1), -beta);
            cdf_[k] = acc;
        }
        for (auto& c : cdf_) c /= acc;
        cdf_.back() = 1.0;
    }

    int operator()(Rng& rng) const {
        const double u = rng.uniform01();
        const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
        return static_cast<int>(it - cdf_.begin()) + 1;
    }

private:
    std::vector<double> cdf_;
};

inline int sample_power_law(Rng& rng, int n, double beta) {
    return PowerLawSampler(n, beta)(rng);
}

// Normal(mean, variance) rounded to the nearest integer, redrawn while the
// result is below 1 and capped at n. A zero variance degenerates to
// clamp(round(mean), 1, n) without consuming randomness.
inline int sample_normal_gt0(Rng& rng, double mean, double variance, int n) {
    if (variance < 0.0) throw std::invalid_argument("sample_normal_gt0: negative variance");
    if (variance == 0.0)
        return static_cast<int>(std::clamp<long long>(std::llround(mean), 1, n));
    const double sd = std::sqrt(variance);
    long long v;
    do {
        v = std::llround(mean + sd * rng.normal());
    } while (v < 1);
    return static_cast<int>(std::min<long long>(v, n));
}

namespace detail {
// Calls fn for k pairwise distinct uniform positions in [0, n). Rejection for
// small k, partial Fisher-Yates over a scratch index array otherwise.
template <typename Fn>
void for_distinct_positions(Rng& rng, int n, int k, Fn&& fn) {
    if (k <= 8) {
        int chosen[8];
        for (int i = 0; i < k; ++i) {
            int pos;
            bool fresh;
            do {
                pos = static_cast<int>(rng.below(n));
                fresh = true;
                for (int j = 0; j < i; ++j)
                    if (chosen[j] == pos) { fresh = false; break; }
            } while (!fresh);
            chosen[i] = pos;
            fn(pos);
        }
        return;
    }
    thread_local std::vector<int> idx;
    idx.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
    for (int i = 0; i < k; ++i) {
        const int j = i + static_cast<int>(rng.below(n - i));
        std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
        fn(idx[static_cast<std::size_t>(i)]);
    }
}
}  // namespace detail

// Flips exactly `strength` pairwise distinct uniformly chosen positions.
inline BitString mutate_strength(const BitString& x, int strength, Rng& rng) {
    const int n = static_cast<int>(x.size());
    if (strength < 0 || strength > n)
        throw std::invalid_argument("mutate_strength: strength outside [0, n]");
    BitString y = x;
    detail::for_distinct_positions(rng, n, strength,
                                   [&y](int pos) { y[static_cast<std::size_t>(pos)] ^= 1; });
    return y;
}

// Biased crossover: start from x and copy the donor at ell ~ Bin_{>0}(n, bias)
// distinct random positions. bias = 1 copies everything.
inline BitString crossover_biased(const BitString& x, const BitString& donor, double bias, Rng& rng) {
    if (x.size() != donor.size()) throw std::invalid_argument("crossover_biased: length mismatch");
    if (!(bias > 0.0 && bias <= 1.0))
        throw std::invalid_argument("crossover_biased: bias must lie in (0, 1]");
    const int n = static_cast<int>(x.size());
    BitString y = x;
    const int take = bias >= 1.0 ? n : sample_binomial_gt0(rng, n, bias);
    detail::for_distinct_positions(
        rng, n, take, [&y, &donor](int pos) { y[static_cast<std::size_t>(pos)] = donor[static_cast<std::size_t>(pos)]; });
    return y;
}

// Classic 1-point crossover: a uniform cut in [1, n], prefixes kept, suffixes
// swapped.
inline std::pair<BitString, BitString> one_point_crossover(const BitString& a, const BitString& b,
                                                           Rng& rng) {
    if (a.size() != b.size()) throw std::invalid_argument("one_point_crossover: length mismatch");
    const int n = static_cast<int>(a.size());
    const int cut = 1 + static_cast<int>(rng.below(n));
    BitString y1 = a, y2 = b;
    for (int i = cut; i < n; ++i) {
        y1[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(i)];
        y2[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i)];
    }
    return {std::move(y1), std::move(y2)};
}

// Fitness-proportionate selection on min-windowed weights w_i = f_i - min f,
// so negative transformed fitness stays selectable; an all-equal pool is
// sampled uniformly. Individuals at the window minimum have weight zero.
inline int roulette_select(std::span<const double> fitness, Rng& rng) {
    if (fitness.empty()) throw std::invalid_argument("roulette_select: empty pool");
    const double lo = *std::min_element(fitness.begin(), fitness.end());
    double total = 0;
    for (const double f : fitness) total += f - lo;
    if (total <= 0.0) return static_cast<int>(rng.below(static_cast<std::int64_t>(fitness.size())));
    const double ticket = rng.uniform01() * total;
    double acc = 0;
    int last_positive = 0;
    for (int i = 0; i < static_cast<int>(fitness.size()); ++i) {
        const double w = fitness[static_cast<std::size_t>(i)] - lo;
        if (w > 0) {
            last_positive = i;
            acc += w;
            if (ticket <= acc) return i;
        }
    }
    return last_positive;
}

// Multiplicative self-adjustment of the two-rate EA: after each iteration the
// rate is halved (floored at 2) with probability s and doubled (capped at
// n/4) otherwise, where s = 3/4 when the best offspring came from the low
// rate group and 1/4 otherwise.
inline double two_rate_update(double rate, bool best_from_low_rate, int n, Rng& rng) {
    const double s = best_from_low_rate ? 0.75 : 0.25;
    if (rng.uniform01() <= s) return std::max(rate / 2.0, 2.0);
    return std::min(2.0 * rate, static_cast<double>(n) / 4.0);
}

enum class SelectionOutcome { improved, equal, worse };

// One-fifth-style population size control of the (1+(lambda,lambda)) GA:
// shrink by F on improvement, grow by F^(1/4) otherwise, within [1, n].
inline double ollga_update(double lambda, SelectionOutcome outcome, double strength, int n) {
    if (outcome == SelectionOutcome::improved) return std::max(lambda / strength, 1.0);
    return std::min(lambda * std::pow(strength, 0.25), static_cast<double>(n));
}

// Log-normal perturbation of a mutation rate: p' = (1 + (1-p)/p * e^(0.22 N))^-1.
// Monotone decreasing in the normal draw; a zero draw returns p exactly.
inline double lognormal_rate(double p, Rng& rng) {
    return 1.0 / (1.0 + (1.0 - p) / p * std::exp(0.22 * rng.normal()));
}

// Marginal one-frequencies of the selected half of a UMDA population,
// clamped into [1/n, 1 - 1/n].
inline std::vector<double> umda_update_model(std::span<const BitString> selected, int population_size,
                                             int n) {
    if (static_cast<int>(selected.size()) * 2 != population_size)
        throw std::invalid_argument("umda_update_model: selected set must be half the population");
    std::vector<double> freq(static_cast<std::size_t>(n));
    const double lo = 1.0 / n;
    const double hi = 1.0 - lo;
    for (int j = 0; j < n; ++j) {
        int ones = 0;
        for (const auto& x : selected) ones += x[static_cast<std::size_t>(j)];
        freq[static_cast<std::size_t>(j)] =
            std::clamp(2.0 * ones / population_size, lo, hi);
    }
    return freq;
}

}  // namespace pbbench
