// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mmwsnr Authors

#pragma once

#include <deque>
#include <string>
#include <string_view>

#include "mmwsnr/syncsig.hpp"

namespace mmw {

enum class FilterKind { none, first_order, moving_average };

// Starting value of the first-order recursion: the first input, or zero
// (reproduces the start-up transient of a filter reset to zero).
enum class FirstOrderInit { first_sample, zero };

struct FilterSpec {
    FilterKind kind = FilterKind::none;
    double alpha = 0.3;  // first_order weight on the new sample, in (0, 1]
    int window = 4;      // moving_average length M
    FirstOrderInit init = FirstOrderInit::first_sample;

    static FilterSpec none() { return {}; }
    static FilterSpec first_order(double alpha, FirstOrderInit init = FirstOrderInit::first_sample) {
        return {FilterKind::first_order, alpha, 4, init};
    }
    static FilterSpec moving_average(int window) { return {FilterKind::moving_average, 0.3, window}; }

    // Stable identifier used in file names and sweep tables: none, fo_a0.3, ma_m4.
    std::string id() const;
    void validate() const;
};

// Parses an id produced by FilterSpec::id().
FilterSpec parse_filter_id(std::string_view id);

struct FilterState {
    double previous = 0.0;      // last first_order output
    std::deque<double> window;  // last M inputs, oldest first
    long long warmup_count = 0; // samples consumed so far
};

// Advances the filter by one raw sample and returns the filtered value.
// Throws NumericError on non-finite input.
double filter_step(FilterState& state, const FilterSpec& spec, double x);

// Applies filter_step along a raw trace, in the linear domain.
SnrTrace filter_trace(const SnrTrace& raw, const FilterSpec& spec);

}  // namespace mmw
