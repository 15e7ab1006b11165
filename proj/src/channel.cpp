// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mmwsnr Authors

#include "mmwsnr/channel.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include "mmwsnr/csv.hpp"
#include "mmwsnr/error.hpp"
#include "mmwsnr/rng.hpp"
#include "mmwsnr/units.hpp"

namespace mmw {

namespace {

// exp(2 pi j x), reducing x modulo 1 first to keep the phase accurate when
// x is a large number of cycles (tau * f_c is in the thousands).
cplx unit_phasor(double cycles) {
    const double frac = cycles - std::floor(cycles);
    const double phase = kTwoPi * frac;
    return {std::cos(phase), std::sin(phase)};
}

double sinc(double x) {
    if (std::abs(x) < 1e-12) return 1.0;
    const double px = std::numbers::pi * x;
    return std::sin(px) / px;
}

}  // namespace

PathSet::PathSet(std::vector<Path> paths) : paths_(std::move(paths)) {
    if (paths_.empty()) throw ConfigError("a path set needs at least one path");
    for (const auto& p : paths_) {
        if (!(p.power >= 0.0)) throw ConfigError("path power must be >= 0");
        if (!(p.delay_s >= 0.0)) throw ConfigError("path delay must be >= 0");
    }
}

double ScenarioConfig::max_doppler_hz() const { return ue_speed_mps * carrier_hz / kSpeedOfLight; }

void ScenarioConfig::validate() const {
    if (!(carrier_hz > 0.0)) throw ConfigError("scenario.carrier_hz must be > 0");
    if (!(bandwidth_hz > 0.0)) throw ConfigError("scenario.bandwidth_hz must be > 0");
    if (!(ue_speed_mps >= 0.0)) throw ConfigError("scenario.ue_speed_mps must be >= 0");
    if (!(path_count_mean > 0.0)) throw ConfigError("scenario.path_count_mean must be > 0");
    if (!(delay_spread_s > 0.0)) throw ConfigError("scenario.delay_spread_s must be > 0");
    if (!std::isfinite(power_decay_db_per_ns)) throw ConfigError("scenario.power_decay_db_per_ns must be finite");
    if (motion_azimuth && !std::isfinite(*motion_azimuth))
        throw ConfigError("scenario.motion_azimuth must be finite");
}

ChannelState::ChannelState(PathSet pathset, std::shared_ptr<const blockage::BlockageTrace> trace,
                           double beta, Band band)
    : pathset_(std::move(pathset)), trace_(std::move(trace)), beta_(beta), band_(band) {
    if (!trace_) throw ConfigError("channel state needs a blockage trace");
    if (!(beta_ > 0.0) || !std::isfinite(beta_)) throw ConfigError("beta must be positive and finite");
    if (!(band_.center_hz > 0.0) || !(band_.width_hz > 0.0)) throw ConfigError("band must be positive");
}

BeamformedChannel::BeamformedChannel(const ChannelState& state, const SteeringVector& w_tx,
                                     const SteeringVector& w_rx)
    : trace_(state.blockage_ptr()), beta_(state.beta()), band_(state.band()) {
    const auto& paths = state.pathset().paths();
    const double inv_l = 1.0 / static_cast<double>(paths.size());
    coeff_.reserve(paths.size());
    for (const auto& p : paths) {
        const cplx beam = inner(w_rx, p.sig_rx) * inner(p.sig_tx, w_tx);
        coeff_.push_back(std::sqrt(p.power * inv_l) * beam);
        delay_.push_back(p.delay_s);
        doppler_.push_back(p.doppler_hz);
    }

    const std::size_t n = paths.size();
    kernel_.resize(n * n);
    for (std::size_t l = 0; l < n; ++l) {
        for (std::size_t m = 0; m < n; ++m) {
            const double dtau = delay_[l] - delay_[m];
            kernel_[l * n + m] = unit_phasor(-dtau * band_.center_hz) * sinc(dtau * band_.width_hz);
        }
    }
}

double BeamformedChannel::blockage_scale(double t) const { return beta_ * trace_->at(t); }

cplx BeamformedChannel::response(double t, double f) const {
    const double slack = 1e-9 * band_.width_hz;
    if (!(f >= band_.low_hz() - slack && f <= band_.high_hz() + slack))
        throw RangeError("frequency " + std::to_string(f) + " Hz outside the system band");
    const double amp = std::sqrt(blockage_scale(t));
    cplx acc{0.0, 0.0};
    for (std::size_t l = 0; l < coeff_.size(); ++l)
        acc += coeff_[l] * unit_phasor(doppler_[l] * t - delay_[l] * f);
    return amp * acc;
}

double BeamformedChannel::band_gain_exact(double t) const {
    const double scale = blockage_scale(t);
    const std::size_t n = coeff_.size();
    std::vector<cplx> c(n);
    for (std::size_t l = 0; l < n; ++l) c[l] = coeff_[l] * unit_phasor(doppler_[l] * t);

    double diag = 0.0;
    double cross = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
        diag += std::norm(c[l]);
        for (std::size_t m = l + 1; m < n; ++m) cross += (c[l] * std::conj(c[m]) * kernel_[l * n + m]).real();
    }
    return scale * (diag + 2.0 * cross);
}

double BeamformedChannel::band_gain_grid(double t, int n_freq_samples) const {
    if (n_freq_samples < 1) throw ConfigError("n_freq_samples must be >= 1");
    const double step = band_.width_hz / n_freq_samples;
    double acc = 0.0;
    for (int k = 0; k < n_freq_samples; ++k) acc += std::norm(response(t, band_.low_hz() + (k + 0.5) * step));
    return acc / n_freq_samples;
}

double BeamformedChannel::band_gain(double t, const SnrIntegration& integration) const {
    return integration.method == BandIntegration::closed_form ? band_gain_exact(t)
                                                              : band_gain_grid(t, integration.n_freq_samples);
}

PathSet generate_pathset(const ScenarioConfig& cfg, const ArrayGeometry& bs_geom, const ArrayGeometry& ue_geom) {
    cfg.validate();
    bs_geom.validate();
    ue_geom.validate();

    Rng rng = make_rng(cfg.seed, Stream::paths);
    std::poisson_distribution<int> count_dist(cfg.path_count_mean);
    const int count = std::max(1, count_dist(rng));

    std::exponential_distribution<double> delay_dist(1.0 / cfg.delay_spread_s);
    std::uniform_real_distribution<double> angle_dist(-std::numbers::pi, std::numbers::pi);

    std::vector<Path> paths;
    paths.reserve(static_cast<std::size_t>(count));
    double total = 0.0;
    for (int i = 0; i < count; ++i) {
        const double delay = delay_dist(rng);
        const double aoa = angle_dist(rng);
        const double aod = angle_dist(rng);
        const double power = db_to_linear(-cfg.power_decay_db_per_ns * delay * 1e9);
        total += power;
        paths.push_back(Path{power, delay, 0.0, aoa, aod, steering_vector(ue_geom, aoa), steering_vector(bs_geom, aod)});
    }
    for (auto& p : paths) p.power /= total;
    return PathSet(std::move(paths));
}

double motion_azimuth(const ScenarioConfig& cfg) {
    if (cfg.motion_azimuth) return *cfg.motion_azimuth;
    Rng rng = make_rng(cfg.seed, Stream::motion);
    return std::uniform_real_distribution<double>(-std::numbers::pi, std::numbers::pi)(rng);
}

PathSet assign_doppler(PathSet paths, const ScenarioConfig& cfg) {
    if (!(cfg.carrier_hz > 0.0)) throw ConfigError("scenario.carrier_hz must be > 0");
    const double fd_max = cfg.max_doppler_hz();
    const double motion = motion_azimuth(cfg);
    for (auto& p : paths.paths()) p.doppler_hz = fd_max * std::cos(p.aoa_azimuth - motion);
    return paths;
}

cplx channel_response(const ChannelState& state, double t, double f, const SteeringVector& w_tx,
                      const SteeringVector& w_rx) {
    return BeamformedChannel(state, w_tx, w_rx).response(t, f);
}

double true_wideband_snr(const ChannelState& state, double t, const SteeringVector& w_tx,
                         const SteeringVector& w_rx, const LinkBudget& link, int n_freq_samples) {
    const double g = BeamformedChannel(state, w_tx, w_rx).band_gain_grid(t, n_freq_samples);
    return g * link.ptx_w / (link.n0_w_per_hz * state.band().width_hz);
}

double true_wideband_snr_exact(const ChannelState& state, double t, const SteeringVector& w_tx,
                               const SteeringVector& w_rx, const LinkBudget& link) {
    const double g = BeamformedChannel(state, w_tx, w_rx).band_gain_exact(t);
    return g * link.ptx_w / (link.n0_w_per_hz * state.band().width_hz);
}

void write_pathset_csv(const std::filesystem::path& path, const PathSet& pathset) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write path set '" + path.string() + "'");
    out << "power,delay_ns,doppler_hz,aoa_deg,aod_deg\n";
    for (const auto& p : pathset.paths()) {
        out << csv::format_double(p.power) << ',' << csv::format_double(p.delay_s * 1e9) << ','
            << csv::format_double(p.doppler_hz) << ',' << csv::format_double(rad_to_deg(p.aoa_azimuth)) << ','
            << csv::format_double(rad_to_deg(p.aod_azimuth)) << '\n';
    }
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace mmw
