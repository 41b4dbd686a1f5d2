#include "csv.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "skintrack/error.hpp"

namespace skintrack::csv {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string> split(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        out.emplace_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

[[noreturn]] void fail(const Row& row, std::string_view name, std::string_view why) {
    throw ParseError("line " + std::to_string(row.line) + ": column '" + std::string(name) + "' " +
                     std::string(why));
}

} // namespace

std::vector<Row> parse(const std::string& text, std::string_view header) {
    const auto expected = split(header);
    std::vector<Row> rows;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = split(line);
        if (!saw_header) {
            if (fields != expected)
                throw ParseError("line " + std::to_string(line_no) + ": expected header '" +
                                 std::string(header) + "'");
            saw_header = true;
            continue;
        }
        if (fields.size() != expected.size())
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(expected.size()) + " columns, got " +
                             std::to_string(fields.size()));
        rows.push_back(Row{line_no, std::move(fields)});
    }
    if (!saw_header) throw ParseError("missing header '" + std::string(header) + "'");
    return rows;
}

long to_long(const Row& row, std::size_t column, std::string_view name) {
    const std::string& field = row.fields.at(column);
    long value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty())
        fail(row, name, "is not an integer: '" + field + "'");
    return value;
}

double to_double(const Row& row, std::size_t column, std::string_view name) {
    const std::string& field = row.fields.at(column);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty() || !std::isfinite(value))
        fail(row, name, "is not a finite number: '" + field + "'");
    return value;
}

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

} // namespace skintrack::csv
