// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mmwsnr Authors

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace mmw::blockage {

// Local blockage factor h(t): a linear power scale common to all paths,
// sampled on a uniform grid starting at t = 0. Only relative levels matter
// since the channel power is rescaled by beta afterwards.
class BlockageTrace {
public:
    BlockageTrace(std::vector<double> samples, double sample_period_s, std::string label = "");

    const std::vector<double>& samples() const { return samples_; }
    double sample_period_s() const { return sample_period_s_; }
    const std::string& label() const { return label_; }
    std::size_t size() const { return samples_.size(); }

    // Number of samples times the period (10 s for 78125 samples at 128 us).
    double duration_s() const { return static_cast<double>(samples_.size()) * sample_period_s_; }
    // Time of the last sample; h(t) is defined on [0, last_time_s()].
    double last_time_s() const { return static_cast<double>(samples_.size() - 1) * sample_period_s_; }

    // Linear interpolation between samples. Throws RangeError outside the span.
    double at(double t) const;

private:
    std::vector<double> samples_;
    double sample_period_s_;
    std::string label_;
};

enum class EventKind { walker, plate, hand };
enum class RampShape { linear, raised_cosine };

std::string_view to_string(EventKind kind);
EventKind parse_event_kind(std::string_view text);
std::string_view to_string(RampShape shape);
RampShape parse_ramp_shape(std::string_view text);

inline constexpr double kRecordPeriodS = 128e-6;

struct BlockageEventSpec {
    EventKind event_kind = EventKind::walker;
    double depth_db = 20.0;
    double event_rate_hz = 0.5;   // Poisson arrival rate of blockage events
    double transition_s = 0.1;    // duration of each ramp (down and up)
    double hold_s = 0.3;          // time spent at full depth between ramps
    double duration_s = 10.0;     // trace length
    double sample_period_s = kRecordPeriodS;
    RampShape ramp = RampShape::raised_cosine;
    std::uint64_t seed = 1;

    // Per-kind defaults: walker 20 dB / 100 ms, plate 35 dB / 30 ms,
    // hand 15 dB / 200 ms.
    static BlockageEventSpec defaults(EventKind kind);

    void validate() const;
};

BlockageTrace synthesize_trace(const BlockageEventSpec& spec);

// Trace CSV: first line `sample_period_s,<value>`, then one linear sample per line.
BlockageTrace load_trace(const std::filesystem::path& path);
void write_trace(const std::filesystem::path& path, const BlockageTrace& trace);

}  // namespace mmw::blockage
