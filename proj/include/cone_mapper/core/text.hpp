#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cone_mapper {

// 17 significant digits: parses back to the identical double.
std::string format_double(double v);

// Whole-token parse; accepts "inf"/"nan".
std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);

}  // namespace cone_mapper
