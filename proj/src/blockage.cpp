// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mmwsnr Authors

#include "mmwsnr/blockage.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include "mmwsnr/csv.hpp"
#include "mmwsnr/error.hpp"
#include "mmwsnr/rng.hpp"
#include "mmwsnr/units.hpp"

namespace mmw::blockage {

BlockageTrace::BlockageTrace(std::vector<double> samples, double sample_period_s, std::string label)
    : samples_(std::move(samples)), sample_period_s_(sample_period_s), label_(std::move(label)) {
    if (!(sample_period_s_ > 0.0) || !std::isfinite(sample_period_s_))
        throw ConfigError("blockage trace sample period must be positive");
    if (samples_.size() < 2) throw ConfigError("blockage trace needs at least 2 samples");
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        if (!(samples_[i] >= 0.0) || !std::isfinite(samples_[i]))
            throw ConfigError("blockage trace sample " + std::to_string(i) + " is negative or not finite");
    }
}

double BlockageTrace::at(double t) const {
    const double pos = t / sample_period_s_;
    const double last = static_cast<double>(samples_.size() - 1);
    // Tolerate round-off at the ends of the span.
    constexpr double kSlack = 1e-9;
    if (!(pos >= -kSlack && pos <= last + kSlack))
        throw RangeError("time " + std::to_string(t) + " s outside blockage trace span [0, " +
                         std::to_string(last_time_s()) + "]");
    const double clamped = std::clamp(pos, 0.0, last);
    const auto i0 = static_cast<std::size_t>(clamped);
    if (i0 + 1 >= samples_.size()) return samples_.back();
    const double frac = clamped - static_cast<double>(i0);
    return samples_[i0] + frac * (samples_[i0 + 1] - samples_[i0]);
}

std::string_view to_string(EventKind kind) {
    switch (kind) {
        case EventKind::walker: return "walker";
        case EventKind::plate: return "plate";
        case EventKind::hand: return "hand";
    }
    return "unknown";
}

EventKind parse_event_kind(std::string_view text) {
    if (text == "walker") return EventKind::walker;
    if (text == "plate") return EventKind::plate;
    if (text == "hand") return EventKind::hand;
    throw ConfigError("unknown blockage event kind '" + std::string(text) + "' (walker|plate|hand)");
}

std::string_view to_string(RampShape shape) {
    return shape == RampShape::linear ? "linear" : "raised_cosine";
}

RampShape parse_ramp_shape(std::string_view text) {
    if (text == "linear") return RampShape::linear;
    if (text == "raised_cosine") return RampShape::raised_cosine;
    throw ConfigError("unknown ramp shape '" + std::string(text) + "' (linear|raised_cosine)");
}

BlockageEventSpec BlockageEventSpec::defaults(EventKind kind) {
    BlockageEventSpec spec;
    spec.event_kind = kind;
    switch (kind) {
        case EventKind::walker:
            spec.depth_db = 20.0;
            spec.transition_s = 0.1;
            spec.hold_s = 0.3;
            spec.event_rate_hz = 0.5;
            break;
        case EventKind::plate:
            spec.depth_db = 35.0;
            spec.transition_s = 0.03;
            spec.hold_s = 1.0;
            spec.event_rate_hz = 0.2;
            break;
        case EventKind::hand:
            spec.depth_db = 15.0;
            spec.transition_s = 0.2;
            spec.hold_s = 0.5;
            spec.event_rate_hz = 0.3;
            break;
    }
    return spec;
}

void BlockageEventSpec::validate() const {
    if (!(depth_db > 0.0)) throw ConfigError("blockage.depth_db must be > 0");
    if (!(event_rate_hz >= 0.0)) throw ConfigError("blockage.event_rate_hz must be >= 0");
    if (!(transition_s > 0.0)) throw ConfigError("blockage.transition_s must be > 0");
    if (!(hold_s >= 0.0)) throw ConfigError("blockage.hold_s must be >= 0");
    if (!(duration_s > 0.0)) throw ConfigError("blockage.duration_s must be > 0");
    if (!(sample_period_s > 0.0)) throw ConfigError("blockage.sample_period_s must be > 0");
    if (duration_s < 2.0 * sample_period_s)
        throw ConfigError("blockage.duration_s must cover at least two samples");
}

namespace {

// Attenuation in dB of one event at time `dt` after its onset: ramp from 0 to
// depth, hold, ramp back to 0.
double event_attenuation_db(const BlockageEventSpec& spec, double dt) {
    const double ramp = spec.transition_s;
    const double end_hold = ramp + spec.hold_s;
    const double end = end_hold + ramp;
    if (dt <= 0.0 || dt >= end) return 0.0;

    double x;  // fraction of full depth
    if (dt < ramp) x = dt / ramp;
    else if (dt <= end_hold) x = 1.0;
    else x = (end - dt) / ramp;

    if (spec.ramp == RampShape::raised_cosine) x = 0.5 * (1.0 - std::cos(std::numbers::pi * x));
    return x * spec.depth_db;
}

}  // namespace

BlockageTrace synthesize_trace(const BlockageEventSpec& spec) {
    spec.validate();
    const auto n = static_cast<std::size_t>(std::llround(spec.duration_s / spec.sample_period_s));

    std::vector<double> onsets;
    if (spec.event_rate_hz > 0.0) {
        Rng rng = make_rng(spec.seed, Stream::blockage);
        std::exponential_distribution<double> gap(spec.event_rate_hz);
        for (double t = gap(rng); t < spec.duration_s; t += gap(rng)) onsets.push_back(t);
    }

    // Overlapping events combine by the deepest attenuation so that the
    // trace never drops below 10^(-depth/10).
    const double event_len = 2.0 * spec.transition_s + spec.hold_s;
    std::vector<double> samples(n, 1.0);
    for (const double onset : onsets) {
        const auto first = static_cast<std::size_t>(std::max(0.0, std::floor(onset / spec.sample_period_s)));
        const auto last = std::min(n, static_cast<std::size_t>(std::ceil((onset + event_len) / spec.sample_period_s)) + 1);
        for (std::size_t i = first; i < last; ++i) {
            const double att = event_attenuation_db(spec, static_cast<double>(i) * spec.sample_period_s - onset);
            samples[i] = std::min(samples[i], db_to_linear(-att));
        }
    }
    const double floor = db_to_linear(-spec.depth_db);
    for (auto& s : samples) s = std::clamp(s, floor, 1.0);

    return BlockageTrace(std::move(samples), spec.sample_period_s,
                         "synthetic:" + std::string(to_string(spec.event_kind)));
}

BlockageTrace load_trace(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open blockage trace '" + path.string() + "'");

    std::string line;
    std::size_t line_no = 0;
    double period = 0.0;
    std::vector<double> samples;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = csv::trim(line);
        if (line_no == 1) {
            const auto fields = csv::split(text);
            if (fields.size() != 2 || fields[0] != "sample_period_s")
                throw ParseError("expected header 'sample_period_s,<value>'", line_no);
            period = csv::parse_double(fields[1], line_no);
            if (!(period > 0.0) || !std::isfinite(period))
                throw ParseError("sample_period_s must be positive", line_no);
            continue;
        }
        if (text.empty()) continue;
        const double value = csv::parse_double(text, line_no);
        if (!(value >= 0.0) || !std::isfinite(value))
            throw ParseError("blockage sample must be finite and nonnegative", line_no);
        samples.push_back(value);
    }
    if (line_no == 0) throw ParseError("empty blockage trace file '" + path.string() + "'");
    if (samples.size() < 2) throw ParseError("blockage trace needs at least 2 samples");
    return BlockageTrace(std::move(samples), period, path.stem().string());
}

void write_trace(const std::filesystem::path& path, const BlockageTrace& trace) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write blockage trace '" + path.string() + "'");
    out << "sample_period_s," << csv::format_double(trace.sample_period_s()) << '\n';
    for (const double s : trace.samples()) out << csv::format_double(s) << '\n';
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace mmw::blockage
