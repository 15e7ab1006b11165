// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mmwsnr Authors

#pragma once

#include <span>

#include "mmwsnr/channel.hpp"

namespace mmw::blockage {

// Time average of gamma(t) over `times`. The per-instant evaluations run in
// an OpenMP loop; the sum is taken in index order so the result does not
// depend on the thread count.
double mean_wideband_snr(const BeamformedChannel& channel, const LinkBudget& link, std::span<const double> times,
                         const SnrIntegration& integration = {});

// Single-threaded reference for mean_wideband_snr.
double mean_wideband_snr_serial(const BeamformedChannel& channel, const LinkBudget& link,
                                std::span<const double> times, const SnrIntegration& integration = {});

// beta such that the time average of gamma(t) over `times` equals
// target_linear. gamma is linear in beta, so this is target / mean(gamma at
// beta = 1). The beta stored in `state` is ignored. Throws CalibrationError
// when the unscaled average is zero (fully blocked trace).
double calibrate_beta(const ChannelState& state, double target_linear, const SteeringVector& w_tx,
                      const SteeringVector& w_rx, const LinkBudget& link, std::span<const double> times,
                      const SnrIntegration& integration = {});

}  // namespace mmw::blockage
