// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mmwsnr Authors

#include "mmwsnr/calib.hpp"

#include <cmath>
#include <string>

#include "mmwsnr/error.hpp"

namespace mmw::calib {

std::string_view to_string(Percentile p) { return p == Percentile::p50 ? "p50" : "p5"; }

Percentile parse_percentile(std::string_view text) {
    if (text == "p50") return Percentile::p50;
    if (text == "p5") return Percentile::p5;
    throw ConfigError("unknown percentile '" + std::string(text) + "' (p50|p5)");
}

RateProfile RateProfile::defaults(Percentile p) {
    RateProfile profile;
    profile.percentile = p;
    profile.lte_spectral_eff = p == Percentile::p50 ? 3.28 : 0.154;
    return profile;
}

void RateProfile::validate() const {
    if (!(lte_spectral_eff >= 0.0)) throw ConfigError("rate.lte_spectral_eff must be >= 0");
    if (!(lte_bw_hz > 0.0)) throw ConfigError("rate.lte_bw_hz must be > 0");
    if (!(mmw_bw_hz > 0.0)) throw ConfigError("rate.mmw_bw_hz must be > 0");
    if (!(mmw_multiplier > 0.0)) throw ConfigError("rate.mmw_multiplier must be > 0");
    if (!(overhead_delta > 0.0 && overhead_delta <= 1.0)) throw ConfigError("rate.overhead_delta must lie in (0, 1]");
    if (n_tx < 1) throw ConfigError("rate.n_tx must be >= 1");
}

double mmwave_rate(const RateProfile& profile) {
    return profile.lte_spectral_eff * profile.lte_bw_hz * profile.mmw_multiplier;
}

double target_snr(const RateProfile& profile, double rate_bps) {
    if (!(rate_bps >= 0.0)) throw ConfigError("rate must be >= 0");
    // expm1 keeps precision for small R / (delta W).
    return std::expm1(std::log(2.0) * rate_bps / (profile.overhead_delta * profile.mmw_bw_hz));
}

double sync_level(double gamma_t, int n_tx) {
    if (n_tx < 1) throw ConfigError("n_tx must be >= 1");
    return gamma_t / n_tx;
}

}  // namespace mmw::calib
