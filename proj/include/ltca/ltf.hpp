#pragma once

#include <filesystem>

#include "ltca/matrix.hpp"

namespace ltca {

// LTF tensor file: ASCII header "ltf <rows> <cols>\n" followed by row-major
// little-endian float64 payload.
void write_ltf(const std::filesystem::path& path, const Matrix& m);
Matrix read_ltf(const std::filesystem::path& path);

}  // namespace ltca
