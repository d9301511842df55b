#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace covo::csv {

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Content is not a well-formed table; `line` is 1-based.
class FormatError : public std::runtime_error {
public:
    FormatError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> row_lines;

    std::optional<std::size_t> column(std::string_view name) const;
    /// Column index or FormatError(1, ...) naming the missing column.
    std::size_t require_column(std::string_view name) const;
};

/// Plain comma-separated text: no quoting, no embedded commas.
Table parse(std::string_view text);
Table read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view text);

/// Shortest text that round-trips the double ("%.17g", with inf/nan spelled out).
std::string format_real(double v);
/// Throws FormatError(line, ...) unless the whole field parses.
double parse_real(std::string_view field, std::size_t line);
std::uint64_t parse_uint(std::string_view field, std::size_t line);

std::vector<std::string> split(std::string_view line, char sep = ',');

}  // namespace covo::csv
