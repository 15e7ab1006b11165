// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mmwsnr Authors

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "mmwsnr/arrays.hpp"
#include "mmwsnr/blockage.hpp"
#include "mmwsnr/channel.hpp"
#include "mmwsnr/syncsig.hpp"

namespace mmw {

// BS weights during synchronization: one active element, or a fixed beam.
enum class SyncPattern { omni, fixed_beam };

std::string_view to_string(SyncPattern p);
SyncPattern parse_sync_pattern(std::string_view text);

struct BlockageSource {
    // Synthetic traces are regenerated per seed; a loaded trace is shared by
    // every realization.
    blockage::BlockageEventSpec synthetic = blockage::BlockageEventSpec::defaults(blockage::EventKind::walker);
    std::shared_ptr<const blockage::BlockageTrace> measured;

    bool is_measured() const { return static_cast<bool>(measured); }
};

// Everything that defines a link realization except the seed and the
// target SNR.
struct Scenario {
    ScenarioConfig channel;
    SyncConfig sync;
    ArrayGeometry bs{8, 8, 0.5};
    ArrayGeometry ue{4, 4, 0.5};
    SyncPattern bs_pattern = SyncPattern::omni;
    double fixed_beam_azimuth = 0.0;  // radians, used with SyncPattern::fixed_beam
    BlockageSource blockage;
    LinkBudget link;
    double horizon_s = 10.0;
    std::optional<int> direction;  // tracked codebook index; strongest beam when unset
    SnrIntegration integration;

    void validate() const;
};

// One seeded draw of the channel with beta = 1.
struct Realization {
    ChannelState state;
    BeamCodebook codebook;
    SteeringVector w_tx;
    int direction;
    std::vector<double> times;  // aligned measurement instants of `direction`
};

Realization realize(const Scenario& scenario, std::uint64_t seed);

// Codebook index maximizing sum_l P_l |w^H u_l^rx|^2 (lowest index on ties).
int strongest_direction(const PathSet& paths, const BeamCodebook& codebook);

struct CalibratedTrack {
    double beta;
    TrackResult tracks;
};

// Calibrates beta so the mean of gamma(t) over the aligned grid equals
// sync_target_linear, then tracks the direction with measurement seed `seed`.
CalibratedTrack run_calibrated(const Realization& r, const Scenario& scenario, double sync_target_linear,
                               std::uint64_t seed);

}  // namespace mmw
