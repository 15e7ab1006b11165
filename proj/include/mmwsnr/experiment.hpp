// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mmwsnr Authors

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "mmwsnr/config.hpp"

namespace mmw {

struct RunOutputs {
    std::vector<std::filesystem::path> files;  // in write order
};

// Per percentile and seed: true, raw and one filtered SNR trace per filter,
// error CDFs, and trace_manifest.json.
RunOutputs run_trace(const ExperimentConfig& cfg);

// Mean dB error over the target grid; sweep.csv and sweep_manifest.json.
RunOutputs run_sweep(const ExperimentConfig& cfg);

struct SounderDemoResult {
    RunOutputs outputs;
    std::size_t n_frames = 0;
    std::size_t n_blockage_samples = 0;
    double blockage_period_s = 0.0;
};

// Synthesizes (or reads) a sounder recording, estimates PDPs and writes the
// extracted blockage trace (sounder_blockage.csv, loadable as a measured
// trace), a strided PDP CSV and sounder_manifest.json.
SounderDemoResult run_sounder_demo(const ExperimentConfig& cfg);

// Fast invariant checks. One line per check on `log`; returns the number of
// failures.
int selfcheck(std::ostream& log);

}  // namespace mmw
