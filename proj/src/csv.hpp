#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace frugal::csv {

/// Splits comma-separated text into records. Handles quoted fields with
/// doubled-quote escapes and CRLF line ends; unquoted cells are trimmed.
std::vector<std::vector<std::string>> split(std::string_view text);

/// Quotes a cell when it contains a comma, quote or newline.
std::string escape(std::string_view cell);

} // namespace frugal::csv
