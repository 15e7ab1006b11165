// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mmwsnr Authors

#pragma once

#include <stdexcept>
#include <string>

namespace mmw {

// Exit-code category carried by every library error. The CLI maps these
// one-to-one onto process exit codes.
enum class ErrorCategory : int {
    config = 2,       // validation of user-supplied parameters
    io = 3,           // file access and parse failures
    runtime = 4,      // numerical preconditions violated at run time
};

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorCategory::config, what) {}
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(ErrorCategory::io, what + " (line " + std::to_string(line) + ")"), line_(line) {}
    explicit ParseError(const std::string& what) : Error(ErrorCategory::io, what), line_(0) {}

    // 1-based line of the offending row, 0 when not line-oriented.
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorCategory::io, what) {}
};

// Time or frequency outside the span a model is defined on.
class RangeError : public Error {
public:
    explicit RangeError(const std::string& what) : Error(ErrorCategory::runtime, what) {}
};

// Beam weights and spatial signatures of different lengths.
class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& what) : Error(ErrorCategory::runtime, what) {}
};

class CalibrationError : public Error {
public:
    explicit CalibrationError(const std::string& what) : Error(ErrorCategory::runtime, what) {}
};

class NumericError : public Error {
public:
    explicit NumericError(const std::string& what) : Error(ErrorCategory::runtime, what) {}
};

}  // namespace mmw
