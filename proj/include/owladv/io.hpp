#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "owladv/owl.hpp"

namespace owladv {

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File contents are malformed. The message names the file and location.
class ParseError : public IoError {
public:
    using IoError::IoError;
};

// Matrices: comma-separated, one row per line. Vectors: one value per line.
// Values are written with 17 significant digits, so finite doubles round-trip
// exactly. Trailing blank lines are accepted on read.

void write_matrix(const std::filesystem::path& path, const Matrix& m);
Matrix read_matrix(const std::filesystem::path& path);

void write_vector(const std::filesystem::path& path, const Vector& v);
Vector read_vector(const std::filesystem::path& path);

/// 17 significant digits (data files).
std::string format_double(double v);
/// Shortest text that parses back to the same double (configs, reports, names).
std::string format_short(double v);

/// Parses a whole token as a double; throws std::invalid_argument otherwise.
double parse_double(std::string_view token);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace owladv
