// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mmwsnr Authors

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace mmw::csv {

std::string_view trim(std::string_view text);
std::vector<std::string_view> split(std::string_view line, char sep = ',');

// Whole-field parse; throws ParseError carrying `line` on failure.
double parse_double(std::string_view text, std::size_t line = 0);
long long parse_int(std::string_view text, std::size_t line = 0);

// Shortest text that parses back to the same double.
std::string format_double(double value);

}  // namespace mmw::csv
