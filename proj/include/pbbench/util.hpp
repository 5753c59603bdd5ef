#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pbbench {

// Locale-independent number formatting (shortest round-trip form).
// Infinities render as "inf"/"-inf", which is also the CSV convention
// for unreachable ERT values.
inline void append_number(std::string& out, double v) {
    if (std::isinf(v)) {
        out += v > 0 ? "inf" : "-inf";
        return;
    }
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, res.ptr);
}

inline void append_number(std::string& out, long long v) {
    char buf[24];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, res.ptr);
}

inline std::string format_number(double v) {
    std::string s;
    append_number(s, v);
    return s;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.push_back(s.substr(start));
            return parts;
        }
        parts.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

inline long long parse_int(std::string_view s) {
    long long v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
    return v;
}

inline double parse_double(std::string_view s) {
    double v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::invalid_argument("not a number: '" + std::string(s) + "'");
    return v;
}

// Parses comma-separated integers and ranges, e.g. "1-6,11-13,15".
inline std::vector<int> parse_int_ranges(std::string_view spec) {
    std::vector<int> out;
    for (auto part : split(spec, ',')) {
        if (part.empty()) continue;
        const auto dash = part.find('-', 1);  // allow a leading minus sign
        if (dash == std::string_view::npos) {
            out.push_back(static_cast<int>(parse_int(part)));
            continue;
        }
        const int lo = static_cast<int>(parse_int(part.substr(0, dash)));
        const int hi = static_cast<int>(parse_int(part.substr(dash + 1)));
        if (hi < lo) throw std::invalid_argument("empty range: '" + std::string(part) + "'");
        for (int v = lo; v <= hi; ++v) out.push_back(v);
    }
    return out;
}

}  // namespace pbbench
