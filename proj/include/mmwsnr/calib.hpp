// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mmwsnr Authors

#pragma once

#include <string_view>

namespace mmw::calib {

enum class Percentile { p50, p5 };

std::string_view to_string(Percentile p);
Percentile parse_percentile(std::string_view text);

// LTE baseline scaled to a mmWave rate, plus the overhead and BS array size
// that turn it into a synchronization-signal SNR.
struct RateProfile {
    Percentile percentile = Percentile::p5;
    double lte_spectral_eff = 0.154;  // rho, bit/s/Hz
    double lte_bw_hz = 50e6;
    double mmw_bw_hz = 500e6;         // W_tot
    double mmw_multiplier = 9.0;
    double overhead_delta = 0.8;      // fraction of resources carrying data
    int n_tx = 64;

    // Cell-median (rho = 3.28) or cell-edge (rho = 0.154) user.
    static RateProfile defaults(Percentile p);
    void validate() const;
};

// R = rho * B_lte * multiplier.
double mmwave_rate(const RateProfile& profile);

// Shannon inversion: gamma_t = 2^(R / (delta * W_tot)) - 1.
double target_snr(const RateProfile& profile, double rate_bps);

// gamma_t / n_tx: the BS array gain is not available to synchronization.
double sync_level(double gamma_t, int n_tx);

}  // namespace mmw::calib
