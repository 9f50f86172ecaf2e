#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace splforge::csv {

/// Joins cells with ',' and a trailing '\n', quoting cells that contain ',', '"' or newlines.
std::string row(const std::vector<std::string>& cells);

/// RFC 4180 reader; tolerates CRLF and a missing final newline. Blank lines are skipped.
std::vector<std::vector<std::string>> parse(std::string_view text);

} // namespace splforge::csv
