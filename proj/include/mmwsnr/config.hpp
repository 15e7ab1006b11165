// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mmwsnr Authors

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mmwsnr/calib.hpp"
#include "mmwsnr/filters.hpp"
#include "mmwsnr/scenario.hpp"
#include "mmwsnr/sounder.hpp"

namespace mmw {

struct SweepGrid {
    double min_db = -30.0;
    double max_db = 25.0;
    double step_db = 5.0;

    // min, min + step, ... up to max inclusive (-30..25 step 5 gives 12 values).
    std::vector<double> values() const;
};

struct SounderDemoConfig {
    sounder::SounderConfig sounder;
    std::vector<sounder::Tap> taps{{0, {1.0, 0.0}}, {7, {0.3, 0.0}}, {19, {0.15, 0.0}}};
    double cfo_hz = 30e3;
    double snr_db = 30.0;
    double duration_s = 10.0;
    int pdp_export_every = 100;  // write every n-th PDP frame to the CSV
    std::optional<std::filesystem::path> capture_file;  // process this capture instead of synthesizing
    std::uint64_t seed = 1;
};

struct ExperimentConfig {
    Scenario scenario;
    std::vector<calib::Percentile> percentiles{calib::Percentile::p5};
    double rho_p50 = 3.28;
    double rho_p5 = 0.154;
    calib::RateProfile rate;  // shared fields; rho comes from the percentile
    std::vector<FilterSpec> filters{FilterSpec::none(), FilterSpec::first_order(0.3), FilterSpec::moving_average(4)};
    SweepGrid sweep;
    std::size_t eval_skip = 10;
    std::size_t cdf_points = 100;
    std::optional<std::filesystem::path> blockage_file;
    SounderDemoConfig sounder;
    std::filesystem::path output_dir = "out";
    std::vector<std::uint64_t> seeds{1};

    calib::RateProfile profile_for(calib::Percentile p) const;
    void validate() const;
};

// Parses an INI-style config. Keys are section-qualified; unknown sections or
// keys are rejected. Relative file paths resolve against `base_dir`. A
// blockage trace file, when configured, is loaded here.
ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = ".");
ExperimentConfig load_config(const std::filesystem::path& path);

// Fully resolved configuration, for run manifests.
nlohmann::json to_json(const ExperimentConfig& cfg);

}  // namespace mmw
