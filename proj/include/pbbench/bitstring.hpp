#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pbbench/rng.hpp"

namespace pbbench {

// Search points are fixed-length strings over {0, 1}; every entry is exactly
// 0 or 1.
using BitString = std::vector<std::uint8_t>;

inline int one_max(const BitString& x) {
    int c = 0;
    for (const auto b : x) c += b;
    return c;
}

inline int leading_ones(const BitString& x) {
    int c = 0;
    const int n = static_cast<int>(x.size());
    while (c < n && x[static_cast<std::size_t>(c)] == 1) ++c;
    return c;
}

inline int hamming_distance(const BitString& a, const BitString& b) {
    if (a.size() != b.size()) throw std::invalid_argument("hamming_distance: length mismatch");
    int d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
    return d;
}

inline std::string bits_to_string(const BitString& x) {
    std::string s(x.size(), '0');
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i]) s[i] = '1';
    return s;
}

inline BitString bits_from_string(std::string_view s) {
    BitString x(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '0' && s[i] != '1')
            throw std::invalid_argument("bits_from_string: non-binary character");
        x[i] = s[i] == '1';
    }
    return x;
}

// Each bit independently 0/1 with probability 1/2.
inline BitString random_bitstring(Rng& rng, int n) {
    if (n < 1) throw std::invalid_argument("random_bitstring: n must be positive");
    BitString x(static_cast<std::size_t>(n));
    for (auto& b : x) b = static_cast<std::uint8_t>(rng.below(2));
    return x;
}

}  // namespace pbbench
