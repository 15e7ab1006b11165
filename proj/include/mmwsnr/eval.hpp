// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mmwsnr Authors

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mmwsnr/filters.hpp"
#include "mmwsnr/scenario.hpp"
#include "mmwsnr/syncsig.hpp"

namespace mmw::eval {

enum class ErrorDomain { linear, db };

struct ErrorSeries {
    std::vector<double> t;
    std::vector<double> err;  // |estimate - truth|, >= 0
    ErrorDomain domain = ErrorDomain::db;

    // Mean over samples [skip, end). Throws when nothing is left.
    double mean(std::size_t skip = 0) const;
};

// Pointwise |est - truth|. The dB domain floors linear values at 1e-12
// before the logarithm, so negative raw estimates map to -120 dB.
ErrorSeries error_series(const SnrTrace& truth, const SnrTrace& estimate, ErrorDomain domain = ErrorDomain::db);

struct CdfPoint {
    double err;
    double prob;  // fraction of samples <= err
};

// Empirical CDF at n_points quantile knots (duplicate knots merged).
std::vector<CdfPoint> error_cdf(const ErrorSeries& series, std::size_t n_points);

void write_cdf_csv(const std::filesystem::path& path, std::span<const CdfPoint> cdf);

struct SweepOptions {
    int n_tx = 64;            // grid values are data-channel targets; sync level is target / n_tx
    std::size_t skip = 10;    // leading filtered samples excluded from the mean error
};

struct SweepResult {
    std::vector<double> target_snr_db;
    std::vector<std::string> filter_ids;
    // mean_err_db[target][filter]; empty when every seed failed calibration.
    std::vector<std::vector<std::optional<double>>> mean_err_db;
    std::vector<std::vector<int>> seeds_used;
    std::vector<std::vector<std::optional<double>>> beta;  // [target][seed], empty when calibration failed
    int n_seeds = 0;

    std::optional<double> at(std::size_t target, std::size_t filter) const { return mean_err_db[target][filter]; }
};

// For each target: calibrate beta, track over every seed, filter with every
// spec and average the per-seed mean dB error across seeds. Cells
// (target x seed) run in an OpenMP loop; aggregation is in index order.
SweepResult sweep_target_snr(const Scenario& scenario, std::span<const FilterSpec> filters,
                             std::span<const double> target_grid_db, std::span<const std::uint64_t> seeds,
                             const SweepOptions& options = {});

// Single-threaded reference for sweep_target_snr.
SweepResult sweep_target_snr_serial(const Scenario& scenario, std::span<const FilterSpec> filters,
                                    std::span<const double> target_grid_db, std::span<const std::uint64_t> seeds,
                                    const SweepOptions& options = {});

// Rows: target_snr_db, filter_id, mean_err_db (or "missing"), n_seeds.
void write_sweep_csv(const std::filesystem::path& path, const SweepResult& result);

// Mean dB error per filter of one calibrated track.
std::vector<double> mean_errors(const TrackResult& tracks, std::span<const FilterSpec> filters, std::size_t skip);

}  // namespace mmw::eval
