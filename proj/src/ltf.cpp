#include "ltca/ltf.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

namespace ltca {

static_assert(std::endian::native == std::endian::little,
              "LTF payload is little-endian; big-endian hosts need byte swaps");

void write_ltf(const std::filesystem::path& path, const Matrix& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for write: " + path.string());
    out << "ltf " << m.rows << " " << m.cols << "\n";
    out.write(reinterpret_cast<const char*>(m.data.data()),
              static_cast<std::streamsize>(m.data.size() * sizeof(double)));
    if (!out) throw IoError("write failed: " + path.string());
}

Matrix read_ltf(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path.string());
    std::string magic;
    std::uint64_t rows = 0, cols = 0;
    in >> magic >> rows >> cols;
    if (!in || magic != "ltf") throw IoError("bad LTF header: " + path.string());
    in.get();  // consume the newline after the header
    Matrix m(rows, cols);
    in.read(reinterpret_cast<char*>(m.data.data()),
            static_cast<std::streamsize>(m.data.size() * sizeof(double)));
    if (in.gcount() != static_cast<std::streamsize>(m.data.size() * sizeof(double)))
        throw IoError("truncated LTF payload: " + path.string());
    return m;
}

}  // namespace ltca
