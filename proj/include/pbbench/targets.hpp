#pragma once

#include <optional>

namespace pbbench {

// Reference analysis targets bundled with the suite for dimensions 64 and
// 625: the best raw value reached by any baseline algorithm in the original
// campaign (equal to the analytic optimum where that was reached). Used as
// default fixed targets for ERT tables and by the `targets` command.
inline std::optional<double> reference_target(int fid, int dim) {
    static constexpr double d64[] = {
        64, 64, 2080, 32, 57, 21, 64, 33, 64, 63.2, 32, 57, 21, 43.8, 33, 64, 64,
        3.981492, 128, 230.4, 384, 28, 8};
    static constexpr double d625[] = {
        625, 625, 195625, 312, 562, 208, 576.4, 314, 625, 625, 312, 562, 208, 36.6,
        314, 625, 625, 4.2655266, 1242, 2420, 3532.8, 268.4, 24};
    if (fid < 1 || fid > 23) return std::nullopt;
    if (dim == 64) return d64[fid - 1];
    if (dim == 625) return d625[fid - 1];
    return std::nullopt;
}

}  // namespace pbbench
