#pragma once

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lbsn {

/// Splits one CSV record. Handles RFC 4180 quoting ("" escapes a quote);
/// embedded newlines are not supported (records are line-oriented here).
/// Returns nullopt on unbalanced quotes.
std::optional<std::vector<std::string>> split_csv_line(std::string_view line);

/// Quotes a field if it contains a comma, quote, or newline.
std::string csv_escape(std::string_view field);

std::string join_csv(const std::vector<std::string>& fields);

/// Reads the next line, stripping a trailing '\r'. Returns false at EOF.
bool read_line(std::istream& in, std::string& line);

}  // namespace lbsn
