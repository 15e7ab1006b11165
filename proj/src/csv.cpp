// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mmwsnr Authors

#include "mmwsnr/csv.hpp"

#include <charconv>
#include <cmath>

#include "mmwsnr/error.hpp"

namespace mmw::csv {

std::string_view trim(std::string_view text) {
    constexpr std::string_view ws = " \t\r\n";
    const auto b = text.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = text.find_last_not_of(ws);
    return text.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

double parse_double(std::string_view text, std::size_t line) {
    text = trim(text);
    double value = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    // from_chars rejects a leading '+', which hand-written files use.
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (text.empty() || ec != std::errc{} || ptr != last)
        throw ParseError("malformed number '" + std::string(text) + "'", line);
    return value;
}

long long parse_int(std::string_view text, std::size_t line) {
    text = trim(text);
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
        throw ParseError("malformed integer '" + std::string(text) + "'", line);
    return value;
}

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) throw NumericError("format_double failed");
    return std::string(buf, ptr);
}

}  // namespace mmw::csv
