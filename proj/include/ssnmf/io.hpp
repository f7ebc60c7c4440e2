#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "ssnmf/instances.hpp"
#include "ssnmf/matrix.hpp"

namespace ssnmf {

/// Comma-separated, no header, one matrix row per line. Blank lines are
/// skipped. Throws ParseError naming line and column (both 1-based) of the
/// first bad cell, DimensionMismatch on ragged rows.
Matrix parse_csv(std::istream& in, const std::string& source = "<input>");
Matrix read_csv(const std::string& path);

/// 17 significant digits, so reading the file back is bit-exact.
void print_csv(std::ostream& out, const Matrix& M);
void write_csv(const std::string& path, const Matrix& M);

struct GrayImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<double> pixels;  ///< row-major, width * height
};

/// Binary P5 with maxval 255. Values are min-max scaled to 0..255; a constant
/// map becomes 255 everywhere (0 if the constant is 0).
void write_pgm(const std::string& path, const GrayImage& image);
/// Reads P5 or P2 (8 or 16 bit). Pixels keep their raw integer values.
GrayImage read_pgm(const std::string& path);

/// {"n": int, "subsets": [[1-based ints]...], "K": int}. Throws SchemaError.
SetCoverInstance parse_setcover_json(const std::string& text);
SetCoverInstance read_setcover_json(const std::string& path);

/// One 0-based index per line.
void write_index_file(const std::string& path, const IndexSet& J);
IndexSet read_index_file(const std::string& path);

}  // namespace ssnmf
