#include "owladv/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace owladv {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) lines.push_back(std::move(line));
    // Trailing blank lines are not data.
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    return lines;
}

[[noreturn]] void fail(const std::filesystem::path& path, std::size_t line, std::size_t column,
                       const std::string& what) {
    std::string msg = path.string() + ":" + std::to_string(line);
    if (column > 0) msg += ":" + std::to_string(column);
    throw ParseError(msg + ": " + what);
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_short(double v) {
    char buf[40];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) return format_double(v);
    return std::string(buf, ptr);
}

double parse_double(std::string_view token) {
    token = trim(token);
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    double value = 0.0;
    const auto* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (token.empty() || ec != std::errc{} || ptr != end) {
        throw std::invalid_argument("malformed number '" + std::string(token) + "'");
    }
    return value;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string() + " for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("error reading " + path.string());
    return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + path.parent_path().string());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw IoError("error writing " + path.string());
}

void write_matrix(const std::filesystem::path& path, const Matrix& m) {
    std::string text;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j > 0) text += ',';
            text += format_double(m(i, j));
        }
        text += '\n';
    }
    write_text(path, text);
}

Matrix read_matrix(const std::filesystem::path& path) {
    const auto lines = split_lines(read_text(path));
    if (lines.empty()) fail(path, 1, 0, "empty matrix file");
    std::vector<std::vector<double>> rows;
    rows.reserve(lines.size());
    for (std::size_t r = 0; r < lines.size(); ++r) {
        const std::string_view line = lines[r];
        if (trim(line).empty()) fail(path, r + 1, 0, "blank line inside matrix");
        std::vector<double> row;
        std::size_t start = 0;
        for (std::size_t col = 1;; ++col) {
            const auto comma = line.find(',', start);
            const auto token = line.substr(start, comma == std::string_view::npos
                                                      ? std::string_view::npos
                                                      : comma - start);
            try {
                row.push_back(parse_double(token));
            } catch (const std::invalid_argument& e) {
                fail(path, r + 1, col, e.what());
            }
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            fail(path, r + 1, 0,
                 "expected " + std::to_string(rows.front().size()) + " columns, found " +
                     std::to_string(row.size()));
        }
        rows.push_back(std::move(row));
    }
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return m;
}

void write_vector(const std::filesystem::path& path, const Vector& v) {
    std::string text;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        text += format_double(v(i));
        text += '\n';
    }
    write_text(path, text);
}

Vector read_vector(const std::filesystem::path& path) {
    const auto lines = split_lines(read_text(path));
    Vector v(static_cast<Eigen::Index>(lines.size()));
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) fail(path, i + 1, 0, "blank line inside vector");
        try {
            v(static_cast<Eigen::Index>(i)) = parse_double(lines[i]);
        } catch (const std::invalid_argument& e) {
            fail(path, i + 1, 1, e.what());
        }
    }
    return v;
}

}  // namespace owladv
