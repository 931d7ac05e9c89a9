#pragma once

#include "roseland/core.hpp"

#include <filesystem>
#include <span>
#include <string>

namespace roseland {

enum class MatrixFormat { Csv, Binary };

/// Reads a matrix from `path`. Files starting with the "LMDF" magic are read
/// as binary, anything else as numeric CSV without a header.
Matrix matrix_read(const std::filesystem::path& path);

/// Binary layout: "LMDF", u32 version = 1, u64 rows, u64 cols, then
/// rows*cols little-endian f64 in row-major order.
void matrix_write(const Matrix& m, const std::filesystem::path& path, MatrixFormat format);

/// Format inferred from the extension: ".bin"/".lmdf" -> binary, else CSV.
MatrixFormat format_for_path(const std::filesystem::path& path);

Matrix parse_csv(std::string_view text);
std::string to_csv(const Matrix& m);
Matrix decode_binary(std::span<const unsigned char> bytes);
std::string encode_binary(const Matrix& m);

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double value);

/// Single-column convenience wrappers.
std::vector<double> read_vector(const std::filesystem::path& path);
void write_vector(std::span<const double> values, const std::filesystem::path& path);

}  // namespace roseland
