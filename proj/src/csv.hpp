#pragma once

// Minimal CSV reading shared by the dataset, label-map and script parsers.
// Fields are plain (no quoting); blank lines are skipped.

#include <string>
#include <string_view>
#include <vector>

namespace skintrack::csv {

struct Row {
    std::size_t line = 0;  // 1-based
    std::vector<std::string> fields;
};

/// Splits text into rows and checks the header line matches `header`.
/// Throws ParseError naming the line on a column-count mismatch.
std::vector<Row> parse(const std::string& text, std::string_view header);

long to_long(const Row& row, std::size_t column, std::string_view name);
double to_double(const Row& row, std::size_t column, std::string_view name);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

} // namespace skintrack::csv
