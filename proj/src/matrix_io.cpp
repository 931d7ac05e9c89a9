#include "roseland/matrix_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

namespace roseland {

namespace {

constexpr std::array<unsigned char, 4> kMagic{'L', 'M', 'D', 'F'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kHeaderBytes = 24;

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failure on '" + path.string() + "'");
  return bytes;
}

void spit(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failure on '" + path.string() + "'");
}

template <typename T>
void put_le(std::string& out, T value) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  const auto bits = std::bit_cast<U>(value);
  for (std::size_t b = 0; b < sizeof(T); ++b) {
    out.push_back(static_cast<char>((bits >> (8 * b)) & 0xFFu));
  }
}

template <typename T>
T get_le(std::span<const unsigned char> bytes, std::size_t offset) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  U bits = 0;
  for (std::size_t b = 0; b < sizeof(T); ++b) {
    bits |= static_cast<U>(bytes[offset + b]) << (8 * b);
  }
  return std::bit_cast<T>(bits);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw FormatError("cannot format value");
  return std::string(buf.data(), ptr);
}

Matrix parse_csv(std::string_view text) {
  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    line = trim(line);
    if (line.empty()) {
      // Only trailing blank lines are tolerated.
      if (trim(text).find_first_not_of("\r\n") != std::string_view::npos) {
        throw FormatError("blank line " + std::to_string(line_no) + " inside CSV data");
      }
      break;
    }
    std::size_t fields = 0;
    while (true) {
      const auto comma = line.find(',');
      const std::string_view token = trim(line.substr(0, comma));
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
      if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
        throw FormatError("non-numeric token '" + std::string(token) + "' on line " +
                          std::to_string(line_no));
      }
      if (!std::isfinite(v)) {
        throw ValueError("non-finite entry on line " + std::to_string(line_no));
      }
      values.push_back(v);
      ++fields;
      if (comma == std::string_view::npos) break;
      line.remove_prefix(comma + 1);
    }
    if (rows == 0) {
      cols = fields;
    } else if (fields != cols) {
      throw FormatError("ragged CSV: line " + std::to_string(line_no) + " has " +
                        std::to_string(fields) + " fields, expected " + std::to_string(cols));
    }
    ++rows;
  }
  if (rows == 0) throw FormatError("empty CSV");
  Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  std::copy(values.begin(), values.end(), m.data());
  return m;
}

std::string to_csv(const Matrix& m) {
  std::string out;
  out.reserve(static_cast<std::size_t>(m.size()) * 20);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out.push_back(',');
      out += format_double(m(i, j));
    }
    out.push_back('\n');
  }
  return out;
}

std::string encode_binary(const Matrix& m) {
  std::string out;
  out.reserve(kHeaderBytes + static_cast<std::size_t>(m.size()) * 8);
  out.append(reinterpret_cast<const char*>(kMagic.data()), kMagic.size());
  put_le(out, kVersion);
  put_le(out, static_cast<std::uint64_t>(m.rows()));
  put_le(out, static_cast<std::uint64_t>(m.cols()));
  for (Index k = 0; k < m.size(); ++k) put_le(out, m.data()[k]);
  return out;
}

Matrix decode_binary(std::span<const unsigned char> bytes) {
  if (bytes.size() < kHeaderBytes) throw FormatError("binary matrix: truncated header");
  if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
    throw FormatError("binary matrix: bad magic");
  }
  const auto version = get_le<std::uint32_t>(bytes, 4);
  if (version != kVersion) {
    throw FormatError("binary matrix: unsupported version " + std::to_string(version));
  }
  const auto rows = get_le<std::uint64_t>(bytes, 8);
  const auto cols = get_le<std::uint64_t>(bytes, 16);
  if (rows == 0 || cols == 0) throw FormatError("binary matrix: zero dimension");
  const auto payload = bytes.size() - kHeaderBytes;
  if (rows > payload / 8 || cols > payload / 8 || rows * cols * 8 != payload) {
    throw FormatError("binary matrix: payload size does not match header");
  }
  Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (Index k = 0; k < m.size(); ++k) {
    m.data()[k] = get_le<double>(bytes, kHeaderBytes + 8 * static_cast<std::size_t>(k));
  }
  require_finite(m, "binary matrix");
  return m;
}

MatrixFormat format_for_path(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  return (ext == ".bin" || ext == ".lmdf") ? MatrixFormat::Binary : MatrixFormat::Csv;
}

Matrix matrix_read(const std::filesystem::path& path) {
  const std::string bytes = slurp(path);
  if (bytes.size() >= kMagic.size() && std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) == 0) {
    return decode_binary({reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size()});
  }
  return parse_csv(bytes);
}

void matrix_write(const Matrix& m, const std::filesystem::path& path, MatrixFormat format) {
  spit(path, format == MatrixFormat::Binary ? encode_binary(m) : to_csv(m));
}

std::vector<double> read_vector(const std::filesystem::path& path) {
  const Matrix m = matrix_read(path);
  if (m.cols() != 1 && m.rows() != 1) {
    throw FormatError("'" + path.string() + "' is not a single row or column");
  }
  return {m.data(), m.data() + m.size()};
}

void write_vector(std::span<const double> values, const std::filesystem::path& path) {
  Matrix m(static_cast<Index>(values.size()), 1);
  std::copy(values.begin(), values.end(), m.data());
  matrix_write(m, path, MatrixFormat::Csv);
}

}  // namespace roseland
