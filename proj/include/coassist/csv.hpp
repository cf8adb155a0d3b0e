#pragma once

#include "coassist/errors.hpp"

#include <concepts>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace coassist {

// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);
std::optional<double> parse_double(std::string_view text);
std::optional<long long> parse_int(std::string_view text);

std::vector<std::string> split_fields(std::string_view line, char sep = ',');
std::string_view trim(std::string_view s);

template <typename Row>
concept CsvRow = requires(const Row& row) {
    { Row::csv_header() } -> std::convertible_to<std::vector<std::string>>;
    { row.csv_fields() } -> std::convertible_to<std::vector<std::string>>;
};

void write_csv_lines(const std::filesystem::path& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows);

// Header line plus one newline-terminated line per row.
template <CsvRow Row>
void write_csv(std::span<const Row> rows, const std::filesystem::path& path) {
    std::vector<std::vector<std::string>> lines;
    lines.reserve(rows.size());
    for (const auto& row : rows) {
        lines.push_back(row.csv_fields());
    }
    write_csv_lines(path, Row::csv_header(), lines);
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    // 1-based source line of each row.
    std::vector<std::size_t> line_numbers;
};

// Reads a comma-separated file with a header line. Blank lines are skipped.
CsvTable read_csv(const std::filesystem::path& path);

} // namespace coassist
