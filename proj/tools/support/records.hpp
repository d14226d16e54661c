// Result tables and their byte-stable CSV/JSON renderings.
//
// Floats are rendered as the shortest decimal that round-trips to the
// same binary64 value, so identical runs produce identical bytes and a
// re-parse recovers the exact numbers.

#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace zrfcli {

using Cell = std::variant<std::uint64_t, std::int64_t, double, std::string>;

struct Table {
    std::string record_type;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);
};

// Shortest round-trip decimal form of a double (std::to_chars).
std::string format_double(double value);

std::string render_cell(const Cell& cell);

// Header line plus one newline-terminated row per record, UTF-8.
std::string render_csv(const Table& table);

// Array of objects with the same field names and values as the CSV.
std::string render_json(const Table& table);

}  // namespace zrfcli
