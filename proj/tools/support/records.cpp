#include "support/records.hpp"

#include <charconv>
#include <stdexcept>

#include "json.hpp"

namespace zrfcli {

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) {
        throw std::invalid_argument("row width does not match table header");
    }
    rows.push_back(std::move(row));
}

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

std::string render_cell(const Cell& cell) {
    if (std::holds_alternative<std::uint64_t>(cell)) {
        return std::to_string(std::get<std::uint64_t>(cell));
    }
    if (std::holds_alternative<std::int64_t>(cell)) {
        return std::to_string(std::get<std::int64_t>(cell));
    }
    if (std::holds_alternative<double>(cell)) {
        return format_double(std::get<double>(cell));
    }
    return csv_escape(std::get<std::string>(cell));
}

std::string render_csv(const Table& table) {
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i > 0) out += ',';
        out += table.columns[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) out += ',';
            out += render_cell(row[i]);
        }
        out += '\n';
    }
    return out;
}

std::string render_json(const Table& table) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json obj;
        for (std::size_t i = 0; i < row.size(); ++i) {
            const Cell& cell = row[i];
            if (std::holds_alternative<std::uint64_t>(cell)) {
                obj[table.columns[i]] = std::get<std::uint64_t>(cell);
            } else if (std::holds_alternative<std::int64_t>(cell)) {
                obj[table.columns[i]] = std::get<std::int64_t>(cell);
            } else if (std::holds_alternative<double>(cell)) {
                obj[table.columns[i]] = std::get<double>(cell);
            } else {
                obj[table.columns[i]] = std::get<std::string>(cell);
            }
        }
        arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
}

}  // namespace zrfcli
