// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mmwsnr Authors

#include "mmwsnr/filters.hpp"

#include <cmath>

#include "mmwsnr/csv.hpp"
#include "mmwsnr/error.hpp"

namespace mmw {

std::string FilterSpec::id() const {
    switch (kind) {
        case FilterKind::none: return "none";
        case FilterKind::first_order:
            return "fo_a" + csv::format_double(alpha) + (init == FirstOrderInit::zero ? "_z" : "");
        case FilterKind::moving_average: return "ma_m" + std::to_string(window);
    }
    return "unknown";
}

void FilterSpec::validate() const {
    if (kind == FilterKind::first_order && !(alpha > 0.0 && alpha <= 1.0))
        throw ConfigError("first-order alpha must lie in (0, 1], got " + csv::format_double(alpha));
    if (kind == FilterKind::moving_average && window < 1)
        throw ConfigError("moving-average window must be >= 1, got " + std::to_string(window));
}

FilterSpec parse_filter_id(std::string_view id) {
    if (id == "none") return FilterSpec::none();
    if (id.starts_with("fo_a")) {
        auto rest = id.substr(4);
        auto init = FirstOrderInit::first_sample;
        if (rest.ends_with("_z")) {
            init = FirstOrderInit::zero;
            rest.remove_suffix(2);
        }
        FilterSpec spec = FilterSpec::first_order(csv::parse_double(rest), init);
        spec.validate();
        return spec;
    }
    if (id.starts_with("ma_m")) {
        FilterSpec spec = FilterSpec::moving_average(static_cast<int>(csv::parse_int(id.substr(4))));
        spec.validate();
        return spec;
    }
    throw ConfigError("unknown filter id '" + std::string(id) + "' (none | fo_a<alpha> | ma_m<M>)");
}

double filter_step(FilterState& state, const FilterSpec& spec, double x) {
    if (!std::isfinite(x)) throw NumericError("filter input is not finite");
    double y = x;
    switch (spec.kind) {
        case FilterKind::none:
            break;
        case FilterKind::first_order:
            if (state.warmup_count == 0 && spec.init == FirstOrderInit::first_sample) state.previous = x;
            y = (1.0 - spec.alpha) * state.previous + spec.alpha * x;
            state.previous = y;
            break;
        case FilterKind::moving_average: {
            state.window.push_back(x);
            while (state.window.size() > static_cast<std::size_t>(spec.window)) state.window.pop_front();
            double sum = 0.0;
            for (const double v : state.window) sum += v;
            y = sum / static_cast<double>(state.window.size());
            break;
        }
    }
    ++state.warmup_count;
    return y;
}

SnrTrace filter_trace(const SnrTrace& raw, const FilterSpec& spec) {
    if (raw.kind() != TraceKind::raw) throw ConfigError("filter_trace expects a raw SNR trace");
    spec.validate();
    FilterState state;
    std::vector<double> out;
    out.reserve(raw.size());
    for (const double x : raw.values()) out.push_back(filter_step(state, spec, x));
    return SnrTrace(raw.t(), std::move(out), TraceKind::filtered);
}

}  // namespace mmw
