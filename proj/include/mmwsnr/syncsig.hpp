// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mmwsnr Authors

#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "mmwsnr/arrays.hpp"
#include "mmwsnr/channel.hpp"
#include "mmwsnr/rng.hpp"

namespace mmw {

// Where the N_sig narrowband sub-signals of one synchronization burst land in
// the band. uniform_random draws each f_k independently, which makes the raw
// estimate unbiased; comb uses fixed evenly spaced centers and is biased on
// frequency-selective channels.
enum class SubSignalPlacement { uniform_random, comb };

struct SyncConfig {
    double t_per_s = 1e-3;
    double t_sig_s = 10e-6;
    int n_sig = 4;
    double w_sig_hz = 1e6;
    int n_dir = 16;
    SubSignalPlacement placement = SubSignalPlacement::uniform_random;

    // Revisit period of one direction, N_dir * T_per.
    double aligned_period_s() const { return n_dir * t_per_s; }
    void validate(double bandwidth_hz) const;
};

std::string_view to_string(SubSignalPlacement placement);
SubSignalPlacement parse_placement(std::string_view text);

struct RawMeasurement {
    double t_s = 0.0;
    int direction_index = 0;
    std::vector<cplx> z;     // matched-filter outputs z_ik, one per sub-signal
    double gamma_hat = 0.0;  // may be negative
};

enum class TraceKind { true_snr, raw, filtered };
std::string_view to_string(TraceKind kind);
TraceKind parse_trace_kind(std::string_view text);

// Uniformly sampled linear SNR sequence.
class SnrTrace {
public:
    SnrTrace(std::vector<double> t, std::vector<double> values, TraceKind kind);

    const std::vector<double>& t() const { return t_; }
    const std::vector<double>& values() const { return values_; }
    TraceKind kind() const { return kind_; }
    std::size_t size() const { return t_.size(); }

    // Identical sample instants within 1e-12 s.
    bool same_grid(const SnrTrace& other) const;

private:
    std::vector<double> t_;
    std::vector<double> values_;
    TraceKind kind_;
};

// CSV with header `t_s,value_linear,kind`.
void write_snr_trace(const std::filesystem::path& path, const SnrTrace& trace);
SnrTrace read_snr_trace(const std::filesystem::path& path);

// E_s = P_tx * T_sig / N_sig.
double sub_signal_energy(double ptx_w, const SyncConfig& cfg);

// One synchronization burst: matched-filter outputs for each sub-signal and
// the raw estimate (1 / (N0 T_sig W_tot)) * sum_k (|z_k|^2 - N0).
RawMeasurement measure_once(const BeamformedChannel& channel, double t, int direction_index,
                            const SyncConfig& cfg, const LinkBudget& link, Rng& rng);

RawMeasurement measure_once(const ChannelState& state, double t, const SteeringVector& w_tx,
                            const SteeringVector& w_rx, const SyncConfig& cfg, const LinkBudget& link,
                            Rng& rng);

struct ScheduleSlot {
    double t_s;
    int direction_index;
};

// One burst per T_per with receive directions cycling round-robin; slots at
// t < horizon_s.
std::vector<ScheduleSlot> scan_schedule(const SyncConfig& cfg, double horizon_s);

// Instants at which `direction_index` is measured within the horizon.
std::vector<double> aligned_times(const SyncConfig& cfg, int direction_index, double horizon_s);

struct TrackResult {
    SnrTrace raw;
    SnrTrace truth;
};

// Raw estimates and true wideband SNR for one receive direction on its
// N_dir * T_per grid.
TrackResult track_direction(const ChannelState& state, const SyncConfig& cfg, int direction_index,
                            const BeamCodebook& codebook, const SteeringVector& w_tx, const LinkBudget& link,
                            double horizon_s, std::uint64_t seed, const SnrIntegration& integration = {});

}  // namespace mmw
