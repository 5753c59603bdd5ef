#pragma once

#include <algorithm>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "pbbench/bitstring.hpp"
#include "pbbench/rng.hpp"

namespace pbbench {

enum class Ruggedness { none, r1, r2, r3 };
enum class WBase { one_max, leading_ones };

inline std::string_view to_string(Ruggedness r) {
    switch (r) {
        case Ruggedness::none: return "none";
        case Ruggedness::r1: return "r1";
        case Ruggedness::r2: return "r2";
        case Ruggedness::r3: return "r3";
    }
    return "none";
}

inline Ruggedness ruggedness_from_string(std::string_view s) {
    if (s == "none") return Ruggedness::none;
    if (s == "r1") return Ruggedness::r1;
    if (s == "r2") return Ruggedness::r2;
    if (s == "r3") return Ruggedness::r3;
    throw std::invalid_argument("unknown ruggedness kind: '" + std::string(s) + "'");
}

// One stack of transformations between the (already instance-transformed)
// search point and a OneMax/LeadingOnes core, applied in the fixed order
//   dummy selection -> neutrality blocks -> epistasis blocks -> core value
//   -> ruggedness remap of the value.
// All layer data is frozen when the problem instance is built.
struct WModelLayers {
    std::vector<int> dummy_positions;  // strictly increasing, 0-based; empty keeps all
    int neutrality_mu = 1;
    int epistasis_nu = 1;
    Ruggedness ruggedness = Ruggedness::none;
    WBase base = WBase::one_max;

    int reduced_length(int n) const {
        return dummy_positions.empty() ? n : static_cast<int>(dummy_positions.size());
    }

    // Effective dimension s = floor(m / mu): the number of decision variables
    // that still influence the core value.
    int effective_dim(int n) const { return reduced_length(n) / neutrality_mu; }
};

// Keeps the entries at the given positions, in order.
inline BitString reduce_dummy(const BitString& x, const std::vector<int>& positions) {
    BitString y;
    y.reserve(positions.size());
    int prev = -1;
    for (const int p : positions) {
        if (p <= prev || p >= static_cast<int>(x.size()))
            throw std::out_of_range("reduce_dummy: positions must be strictly increasing and in range");
        y.push_back(x[static_cast<std::size_t>(p)]);
        prev = p;
    }
    return y;
}

// Majority vote over consecutive size-mu blocks; a block maps to 1 iff it
// holds at least mu/2 ones (ties go to 1). Trailing bits that do not fill a
// block are dropped.
inline BitString apply_neutrality(const BitString& x, int mu) {
    if (mu < 1) throw std::invalid_argument("apply_neutrality: mu must be positive");
    if (mu == 1) return x;
    const int m = static_cast<int>(x.size()) / mu;
    BitString y(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        int ones = 0;
        for (int j = i * mu; j < (i + 1) * mu; ++j) ones += x[static_cast<std::size_t>(j)];
        y[static_cast<std::size_t>(i)] = 2 * ones >= mu ? 1 : 0;
    }
    return y;
}

// Per-block epistasis permutation: output bit i is the XOR of every block bit
// except bit i+1, and the last output is the XOR of the whole block. Size 2
// swaps the two bits, size 1 is the identity. Flipping one input bit inside a
// block flips at least blocksize-1 output bits.
inline void epistasis_block(const std::uint8_t* in, std::uint8_t* out, int m) {
    if (m == 1) {
        out[0] = in[0];
        return;
    }
    if (m == 2) {
        const std::uint8_t a = in[0], b = in[1];
        out[0] = b;
        out[1] = a;
        return;
    }
    std::uint8_t all = 0;
    for (int i = 0; i < m; ++i) all ^= in[i];
    for (int i = 0; i + 1 < m; ++i) out[i] = all ^ in[i + 1];
    out[m - 1] = all;
}

// Applies the block permutation to consecutive size-nu blocks; a trailing
// block of size n mod nu is mapped by the same rule at its own size.
inline BitString apply_epistasis(const BitString& x, int nu) {
    if (nu < 1) throw std::invalid_argument("apply_epistasis: nu must be positive");
    if (nu == 1) return x;
    const int n = static_cast<int>(x.size());
    BitString y(static_cast<std::size_t>(n));
    int i = 0;
    for (; i + nu <= n; i += nu) epistasis_block(x.data() + i, y.data() + i, nu);
    if (i < n) epistasis_block(x.data() + i, y.data() + i, n - i);
    return y;
}

// The three ruggedness maps over the value range [0..s].
//   r1 collapses neighbouring values into plateaus while keeping their order.
//   r2 swaps the two values inside blocks of size two below the optimum.
//   r3 reverses the value order inside blocks of size five below the optimum.
// All three keep v = s as the unique maximum.
inline int ruggedness_value(Ruggedness kind, int v, int s) {
    if (v < 0 || v > s) throw std::out_of_range("ruggedness_value: value outside [0, s]");
    switch (kind) {
        case Ruggedness::none:
            return v;
        case Ruggedness::r1:
            if (v == s) return (s + 1) / 2 + 1;
            return (s % 2 == 0 ? v / 2 : (v + 1) / 2) + 1;
        case Ruggedness::r2:
            if (v == s) return s;
            if (v % 2 == s % 2) return v + 1;
            return std::max(v - 1, 0);
        case Ruggedness::r3: {
            if (v == s) return s;
            const int q = s / 5;
            if (v >= s - 5 * q) {
                const int j = (s - v + 4) / 5;  // block index, 1..q
                const int k = v - (s - 5 * j);
                return s - 5 * j + (4 - k);
            }
            return s - (5 * q - 1) - v;
        }
    }
    return v;
}

inline int ruggedness_max(Ruggedness kind, int s) {
    return kind == Ruggedness::r1 ? (s + 1) / 2 + 1 : s;
}

// Full pipeline value of an already instance-transformed string.
inline int wmodel_value(const WModelLayers& layers, const BitString& x) {
    const BitString* cur = &x;
    BitString a, b;
    if (!layers.dummy_positions.empty()) {
        a = reduce_dummy(*cur, layers.dummy_positions);
        cur = &a;
    }
    if (layers.neutrality_mu > 1) {
        b = apply_neutrality(*cur, layers.neutrality_mu);
        cur = &b;
    }
    if (layers.epistasis_nu > 1) {
        a = apply_epistasis(*cur, layers.epistasis_nu);
        cur = &a;
    }
    const int v = layers.base == WBase::one_max ? one_max(*cur) : leading_ones(*cur);
    const int s = static_cast<int>(cur->size());
    return layers.ruggedness == Ruggedness::none ? v
                                                 : ruggedness_value(layers.ruggedness, v, s);
}

// Largest value the pipeline can reach (the epistasis map is a bijection per
// block, so the core can always attain s).
inline int wmodel_max(const WModelLayers& layers, int n) {
    return ruggedness_max(layers.ruggedness, layers.effective_dim(n));
}

// Layer set of the catalog functions F4..F17: dummy reductions to n/2 and
// 0.9n, neutrality mu=3, epistasis nu=4, and the ruggedness maps r1/r2/r3,
// over OneMax (F4-F10) or LeadingOnes (F11-F17). Dummy positions are drawn
// once from the given generator and frozen into the instance.
inline WModelLayers wmodel_catalog(int fid, int n, Rng& rng) {
    if (fid < 4 || fid > 17) throw std::invalid_argument("wmodel_catalog: fid outside [4, 17]");
    WModelLayers layers;
    layers.base = fid <= 10 ? WBase::one_max : WBase::leading_ones;
    const int variant = fid <= 10 ? fid - 4 : fid - 11;
    switch (variant) {
        case 0:
        case 1: {
            const int m = variant == 0 ? n / 2 : 9 * n / 10;
            if (m < 1)
                throw std::invalid_argument("wmodel_catalog: dimension too small for dummy reduction");
            auto pick = random_permutation(rng, n);
            pick.resize(static_cast<std::size_t>(m));
            std::sort(pick.begin(), pick.end());
            layers.dummy_positions = std::move(pick);
            break;
        }
        case 2:
            layers.neutrality_mu = 3;
            break;
        case 3:
            layers.epistasis_nu = 4;
            break;
        case 4:
            layers.ruggedness = Ruggedness::r1;
            break;
        case 5:
            layers.ruggedness = Ruggedness::r2;
            break;
        case 6:
            layers.ruggedness = Ruggedness::r3;
            break;
    }
    return layers;
}

}  // namespace pbbench
