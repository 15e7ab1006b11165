// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mmwsnr Authors

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <vector>

#include "mmwsnr/arrays.hpp"
#include "mmwsnr/blockage.hpp"

namespace mmw {

struct Path {
    double power = 1.0;        // P_l, linear
    double delay_s = 0.0;      // tau_l
    double doppler_hz = 0.0;   // f_{d,l}
    double aoa_azimuth = 0.0;  // radians
    double aod_azimuth = 0.0;  // radians
    SteeringVector sig_rx;     // u_l^rx
    SteeringVector sig_tx;     // u_l^tx
};

class PathSet {
public:
    explicit PathSet(std::vector<Path> paths);

    const std::vector<Path>& paths() const { return paths_; }
    std::vector<Path>& paths() { return paths_; }
    std::size_t size() const { return paths_.size(); }

private:
    std::vector<Path> paths_;
};

struct Band {
    double center_hz = 28e9;
    double width_hz = 500e6;

    double low_hz() const { return center_hz - 0.5 * width_hz; }
    double high_hz() const { return center_hz + 0.5 * width_hz; }
};

struct ScenarioConfig {
    double carrier_hz = 28e9;
    double bandwidth_hz = 500e6;
    double ue_speed_mps = 1.0;
    // Direction of UE motion; drawn uniformly from the seed when unset.
    std::optional<double> motion_azimuth;
    double path_count_mean = 10.0;
    double delay_spread_s = 100e-9;
    double power_decay_db_per_ns = 0.1;
    std::uint64_t seed = 1;

    Band band() const { return {carrier_hz, bandwidth_hz}; }
    double max_doppler_hz() const;
    void validate() const;
};

struct LinkBudget {
    double ptx_w = 1.0;
    double n0_w_per_hz = 4.0e-21;  // roughly kT at 290 K
};

// How the band average G(t) of |w_rx^H H(t, f) w_tx|^2 is evaluated.
// closed_form integrates the multipath sum analytically (exact); grid takes
// the mean over n_freq_samples midpoints spanning the band.
enum class BandIntegration { closed_form, grid };

struct SnrIntegration {
    BandIntegration method = BandIntegration::closed_form;
    int n_freq_samples = 64;
};

// Static multipath parameters plus the blockage modulation
// g_l(t) = beta * P_l * h(t).
class ChannelState {
public:
    ChannelState(PathSet pathset, std::shared_ptr<const blockage::BlockageTrace> trace, double beta,
                 Band band);

    const PathSet& pathset() const { return pathset_; }
    const blockage::BlockageTrace& blockage() const { return *trace_; }
    std::shared_ptr<const blockage::BlockageTrace> blockage_ptr() const { return trace_; }
    double beta() const { return beta_; }
    const Band& band() const { return band_; }

    ChannelState with_beta(double beta) const { return {pathset_, trace_, beta, band_}; }

private:
    PathSet pathset_;
    std::shared_ptr<const blockage::BlockageTrace> trace_;
    double beta_;
    Band band_;
};

// The scalar channel seen through fixed TX/RX beams. Path-by-beam products
// are computed once so repeated evaluation over (t, f) is cheap.
class BeamformedChannel {
public:
    BeamformedChannel(const ChannelState& state, const SteeringVector& w_tx, const SteeringVector& w_rx);

    // w_rx^H H(t, f) w_tx. Throws RangeError when t or f is outside the model span.
    cplx response(double t, double f) const;

    // (1/W) * integral over the band of |response(t, f)|^2.
    double band_gain(double t, const SnrIntegration& integration = {}) const;
    double band_gain_exact(double t) const;
    double band_gain_grid(double t, int n_freq_samples) const;

    std::size_t path_count() const { return coeff_.size(); }
    const Band& band() const { return band_; }

private:
    double blockage_scale(double t) const;  // beta * h(t)

    std::shared_ptr<const blockage::BlockageTrace> trace_;
    double beta_;
    Band band_;
    std::vector<cplx> coeff_;    // sqrt(P_l / L) * (w_rx^H u_rx)(u_tx^H w_tx)
    std::vector<double> delay_;
    std::vector<double> doppler_;
    // Band average of exp(-2 pi j (tau_l - tau_m) f), row-major L x L.
    std::vector<cplx> kernel_;
};

// Step 1 and 2 of the path generator: counts, delays, powers, angles and
// spatial signatures. Powers sum to one.
PathSet generate_pathset(const ScenarioConfig& cfg, const ArrayGeometry& bs_geom,
                         const ArrayGeometry& ue_geom);

// f_d = f_dmax * cos(aoa - motion_azimuth).
PathSet assign_doppler(PathSet paths, const ScenarioConfig& cfg);

// Resolved motion azimuth: the configured value or a seeded uniform draw.
double motion_azimuth(const ScenarioConfig& cfg);

cplx channel_response(const ChannelState& state, double t, double f, const SteeringVector& w_tx,
                      const SteeringVector& w_rx);

// gamma(t) = G(t) * P_tx / (N0 * W_tot), with G(t) on an n_freq_samples grid.
double true_wideband_snr(const ChannelState& state, double t, const SteeringVector& w_tx,
                         const SteeringVector& w_rx, const LinkBudget& link, int n_freq_samples);

// Same quantity with the band integral evaluated in closed form.
double true_wideband_snr_exact(const ChannelState& state, double t, const SteeringVector& w_tx,
                               const SteeringVector& w_rx, const LinkBudget& link);

// One row per path: power, delay_ns, doppler_hz, aoa_deg, aod_deg.
void write_pathset_csv(const std::filesystem::path& path, const PathSet& pathset);

}  // namespace mmw
