// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mmwsnr Authors

#include "mmwsnr/blockage_calibration.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include "mmwsnr/error.hpp"

namespace mmw::blockage {

namespace {

double snr_scale(const BeamformedChannel& channel, const LinkBudget& link) {
    return link.ptx_w / (link.n0_w_per_hz * channel.band().width_hz);
}

}  // namespace

double mean_wideband_snr(const BeamformedChannel& channel, const LinkBudget& link, std::span<const double> times,
                         const SnrIntegration& integration) {
    if (times.empty()) throw ConfigError("mean_wideband_snr: empty time grid");
    const auto n = static_cast<long long>(times.size());
    std::vector<double> gains(times.size());
    // Exceptions cannot cross the OpenMP region; the first failure is rethrown after.
    std::exception_ptr failure;
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n; ++i) {
        try {
            gains[static_cast<std::size_t>(i)] = channel.band_gain(times[static_cast<std::size_t>(i)], integration);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    const double sum = std::accumulate(gains.begin(), gains.end(), 0.0);
    return sum / static_cast<double>(times.size()) * snr_scale(channel, link);
}

double mean_wideband_snr_serial(const BeamformedChannel& channel, const LinkBudget& link,
                                std::span<const double> times, const SnrIntegration& integration) {
    if (times.empty()) throw ConfigError("mean_wideband_snr: empty time grid");
    double sum = 0.0;
    for (const double t : times) sum += channel.band_gain(t, integration);
    return sum / static_cast<double>(times.size()) * snr_scale(channel, link);
}

double calibrate_beta(const ChannelState& state, double target_linear, const SteeringVector& w_tx,
                      const SteeringVector& w_rx, const LinkBudget& link, std::span<const double> times,
                      const SnrIntegration& integration) {
    if (!(target_linear > 0.0) || !std::isfinite(target_linear))
        throw ConfigError("calibration target must be positive and finite");
    const ChannelState unit = state.with_beta(1.0);
    const double mean = mean_wideband_snr(BeamformedChannel(unit, w_tx, w_rx), link, times, integration);
    if (!(mean > 0.0) || !std::isfinite(mean))
        throw CalibrationError("cannot calibrate beta: average SNR at beta = 1 is zero (trace fully blocked?)");
    return target_linear / mean;
}

}  // namespace mmw::blockage
