// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mmwsnr Authors

#include "mmwsnr/scenario.hpp"

#include <cmath>

#include "mmwsnr/blockage_calibration.hpp"
#include "mmwsnr/error.hpp"

namespace mmw {

std::string_view to_string(SyncPattern p) { return p == SyncPattern::omni ? "omni" : "fixed_beam"; }

SyncPattern parse_sync_pattern(std::string_view text) {
    if (text == "omni") return SyncPattern::omni;
    if (text == "fixed_beam") return SyncPattern::fixed_beam;
    throw ConfigError("unknown BS sync pattern '" + std::string(text) + "' (omni|fixed_beam)");
}

void Scenario::validate() const {
    channel.validate();
    sync.validate(channel.bandwidth_hz);
    bs.validate();
    ue.validate();
    if (!blockage.is_measured()) blockage.synthetic.validate();
    if (!(link.ptx_w > 0.0)) throw ConfigError("link.ptx_w must be > 0");
    if (!(link.n0_w_per_hz > 0.0)) throw ConfigError("link.n0_w_per_hz must be > 0");
    if (!(horizon_s > 0.0)) throw ConfigError("run.horizon_s must be > 0");
    if (direction && (*direction < 0 || *direction >= sync.n_dir))
        throw ConfigError("run.direction must lie in [0, sync.n_dir)");
    if (integration.n_freq_samples < 1) throw ConfigError("run.n_freq_samples must be >= 1");
    if (!std::isfinite(fixed_beam_azimuth)) throw ConfigError("arrays.fixed_beam_azimuth_deg must be finite");
}

int strongest_direction(const PathSet& paths, const BeamCodebook& codebook) {
    int best = 0;
    double best_gain = -1.0;
    for (std::size_t i = 0; i < codebook.size(); ++i) {
        double gain = 0.0;
        for (const auto& p : paths.paths()) gain += p.power * std::norm(inner(codebook.beams[i], p.sig_rx));
        if (gain > best_gain) {
            best_gain = gain;
            best = static_cast<int>(i);
        }
    }
    return best;
}

Realization realize(const Scenario& scenario, std::uint64_t seed) {
    scenario.validate();
    ScenarioConfig cfg = scenario.channel;
    cfg.seed = seed;
    PathSet paths = assign_doppler(generate_pathset(cfg, scenario.bs, scenario.ue), cfg);

    std::shared_ptr<const blockage::BlockageTrace> trace = scenario.blockage.measured;
    if (!trace) {
        auto spec = scenario.blockage.synthetic;
        spec.seed = seed;
        trace = std::make_shared<const blockage::BlockageTrace>(blockage::synthesize_trace(spec));
    }

    BeamCodebook codebook = uniform_codebook(scenario.ue, scenario.sync.n_dir);
    const int direction = scenario.direction.value_or(strongest_direction(paths, codebook));
    auto times = aligned_times(scenario.sync, direction, scenario.horizon_s);
    if (times.empty()) throw ConfigError("horizon too short: no aligned measurement of the tracked direction");
    if (times.back() > trace->last_time_s() + 1e-9)
        throw ConfigError("run.horizon_s extends past the blockage trace (" + std::to_string(trace->duration_s()) + " s)");

    SteeringVector w_tx = scenario.bs_pattern == SyncPattern::omni
                              ? SteeringVector::single_element(scenario.bs.size())
                              : steering_vector(scenario.bs, scenario.fixed_beam_azimuth);

    return Realization{ChannelState(std::move(paths), std::move(trace), 1.0, cfg.band()), std::move(codebook),
                       std::move(w_tx), direction, std::move(times)};
}

CalibratedTrack run_calibrated(const Realization& r, const Scenario& scenario, double sync_target_linear,
                               std::uint64_t seed) {
    const auto& w_rx = r.codebook.beams[static_cast<std::size_t>(r.direction)];
    const double beta =
        blockage::calibrate_beta(r.state, sync_target_linear, r.w_tx, w_rx, scenario.link, r.times, scenario.integration);
    const ChannelState state = r.state.with_beta(beta);
    return {beta, track_direction(state, scenario.sync, r.direction, r.codebook, r.w_tx, scenario.link,
                                  scenario.horizon_s, seed, scenario.integration)};
}

}  // namespace mmw
