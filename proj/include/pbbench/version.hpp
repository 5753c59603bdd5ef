#pragma once

namespace pbbench {

inline constexpr const char* suite_name = "pbbench";
inline constexpr const char* suite_version = "1.0.0";

// On-disk format revision shared by config files, info files and dat files.
inline constexpr int data_format = 1;

}  // namespace pbbench
