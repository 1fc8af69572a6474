#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace voltext {

// Splits one delimited line; no quoting (none of our formats need it).
std::vector<std::string> split_line(std::string_view line, char delim);
std::string_view trim(std::string_view s);
double parse_double(std::string_view s);

}  // namespace voltext
