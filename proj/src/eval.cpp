// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mmwsnr Authors

#include "mmwsnr/eval.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>

#include "mmwsnr/calib.hpp"
#include "mmwsnr/csv.hpp"
#include "mmwsnr/error.hpp"
#include "mmwsnr/units.hpp"

namespace mmw::eval {

double ErrorSeries::mean(std::size_t skip) const {
    if (skip >= err.size())
        throw ConfigError("error series of length " + std::to_string(err.size()) + " has nothing left after skipping " +
                          std::to_string(skip));
    double sum = 0.0;
    for (std::size_t i = skip; i < err.size(); ++i) sum += err[i];
    return sum / static_cast<double>(err.size() - skip);
}

ErrorSeries error_series(const SnrTrace& truth, const SnrTrace& estimate, ErrorDomain domain) {
    if (truth.kind() != TraceKind::true_snr) throw ConfigError("error_series: first trace must be the true SNR");
    if (estimate.kind() == TraceKind::true_snr) throw ConfigError("error_series: second trace must be an estimate");
    if (!truth.same_grid(estimate)) throw ConfigError("error_series: traces are on different time grids");

    ErrorSeries out;
    out.t = truth.t();
    out.domain = domain;
    out.err.reserve(truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const double a = truth.values()[i];
        const double b = estimate.values()[i];
        out.err.push_back(domain == ErrorDomain::db ? std::abs(linear_to_db(b) - linear_to_db(a)) : std::abs(b - a));
    }
    return out;
}

std::vector<CdfPoint> error_cdf(const ErrorSeries& series, std::size_t n_points) {
    if (series.err.empty()) throw ConfigError("error_cdf: empty series");
    if (n_points < 1) throw ConfigError("error_cdf: n_points must be >= 1");
    std::vector<double> sorted = series.err;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();

    std::vector<CdfPoint> cdf;
    for (std::size_t i = 1; i <= n_points; ++i) {
        // Knot at the ceil(i/n_points * n)-th order statistic; the last knot is the maximum.
        const std::size_t rank = std::max<std::size_t>(1, (i * n + n_points - 1) / n_points);
        const double value = sorted[rank - 1];
        if (!cdf.empty() && cdf.back().err == value) continue;
        const auto count = static_cast<std::size_t>(std::upper_bound(sorted.begin(), sorted.end(), value) - sorted.begin());
        cdf.push_back({value, static_cast<double>(count) / static_cast<double>(n)});
    }
    return cdf;
}

void write_cdf_csv(const std::filesystem::path& path, std::span<const CdfPoint> cdf) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write CDF '" + path.string() + "'");
    out << "err_db,prob\n";
    for (const auto& p : cdf) out << csv::format_double(p.err) << ',' << csv::format_double(p.prob) << '\n';
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::vector<double> mean_errors(const TrackResult& tracks, std::span<const FilterSpec> filters, std::size_t skip) {
    std::vector<double> out;
    out.reserve(filters.size());
    for (const auto& spec : filters) {
        const SnrTrace filtered = filter_trace(tracks.raw, spec);
        out.push_back(error_series(tracks.truth, filtered, ErrorDomain::db).mean(skip));
    }
    return out;
}

namespace {

struct Cell {
    bool valid = false;
    double beta = 0.0;
    std::vector<double> err;  // one per filter
};

void check_sweep_inputs(std::span<const FilterSpec> filters, std::span<const double> targets,
                        std::span<const std::uint64_t> seeds) {
    if (targets.empty()) throw ConfigError("sweep needs at least one target SNR");
    if (seeds.empty()) throw ConfigError("sweep needs at least one seed");
    if (filters.empty()) throw ConfigError("sweep needs at least one filter spec");
    for (const auto& f : filters) f.validate();
}

Cell run_cell(const Realization& r, const Scenario& scenario, std::span<const FilterSpec> filters, double target_db,
              std::uint64_t seed, const SweepOptions& options) {
    const double sync_target = calib::sync_level(db_to_linear(target_db), options.n_tx);
    Cell cell;
    try {
        const auto run = run_calibrated(r, scenario, sync_target, seed);
        cell.beta = run.beta;
        cell.err = mean_errors(run.tracks, filters, options.skip);
        cell.valid = true;
    } catch (const CalibrationError&) {
        cell.valid = false;
    }
    return cell;
}

SweepResult aggregate(std::span<const FilterSpec> filters, std::span<const double> targets,
                      std::span<const std::uint64_t> seeds, const std::vector<Cell>& cells) {
    SweepResult result;
    result.target_snr_db.assign(targets.begin(), targets.end());
    for (const auto& f : filters) result.filter_ids.push_back(f.id());
    result.n_seeds = static_cast<int>(seeds.size());
    result.mean_err_db.assign(targets.size(), std::vector<std::optional<double>>(filters.size()));
    result.seeds_used.assign(targets.size(), std::vector<int>(filters.size(), 0));
    result.beta.assign(targets.size(), std::vector<std::optional<double>>(seeds.size()));
    for (std::size_t ti = 0; ti < targets.size(); ++ti)
        for (std::size_t si = 0; si < seeds.size(); ++si)
            if (cells[ti * seeds.size() + si].valid) result.beta[ti][si] = cells[ti * seeds.size() + si].beta;
    for (std::size_t ti = 0; ti < targets.size(); ++ti) {
        for (std::size_t fi = 0; fi < filters.size(); ++fi) {
            double sum = 0.0;
            int used = 0;
            for (std::size_t si = 0; si < seeds.size(); ++si) {
                const Cell& c = cells[ti * seeds.size() + si];
                if (!c.valid) continue;
                sum += c.err[fi];
                ++used;
            }
            result.seeds_used[ti][fi] = used;
            if (used > 0) result.mean_err_db[ti][fi] = sum / used;
        }
    }
    return result;
}

}  // namespace

SweepResult sweep_target_snr(const Scenario& scenario, std::span<const FilterSpec> filters,
                             std::span<const double> target_grid_db, std::span<const std::uint64_t> seeds,
                             const SweepOptions& options) {
    check_sweep_inputs(filters, target_grid_db, seeds);

    // Realizations depend on the seed only; every target reuses them.
    std::vector<std::optional<Realization>> realizations(seeds.size());
    std::vector<Cell> cells(target_grid_db.size() * seeds.size());
    std::exception_ptr failure;

    const auto n_seeds = static_cast<long long>(seeds.size());
#pragma omp parallel for schedule(dynamic)
    for (long long si = 0; si < n_seeds; ++si) {
        try {
            realizations[static_cast<std::size_t>(si)].emplace(realize(scenario, seeds[static_cast<std::size_t>(si)]));
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    const auto n_cells = static_cast<long long>(cells.size());
#pragma omp parallel for schedule(dynamic)
    for (long long ci = 0; ci < n_cells; ++ci) {
        const auto ti = static_cast<std::size_t>(ci) / seeds.size();
        const auto si = static_cast<std::size_t>(ci) % seeds.size();
        try {
            cells[static_cast<std::size_t>(ci)] =
                run_cell(*realizations[si], scenario, filters, target_grid_db[ti], seeds[si], options);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return aggregate(filters, target_grid_db, seeds, cells);
}

SweepResult sweep_target_snr_serial(const Scenario& scenario, std::span<const FilterSpec> filters,
                                    std::span<const double> target_grid_db, std::span<const std::uint64_t> seeds,
                                    const SweepOptions& options) {
    check_sweep_inputs(filters, target_grid_db, seeds);
    std::vector<Cell> cells(target_grid_db.size() * seeds.size());
    for (std::size_t si = 0; si < seeds.size(); ++si) {
        const Realization r = realize(scenario, seeds[si]);
        for (std::size_t ti = 0; ti < target_grid_db.size(); ++ti)
            cells[ti * seeds.size() + si] = run_cell(r, scenario, filters, target_grid_db[ti], seeds[si], options);
    }
    return aggregate(filters, target_grid_db, seeds, cells);
}

void write_sweep_csv(const std::filesystem::path& path, const SweepResult& result) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write sweep '" + path.string() + "'");
    out << "target_snr_db,filter_id,mean_err_db,n_seeds\n";
    for (std::size_t ti = 0; ti < result.target_snr_db.size(); ++ti) {
        for (std::size_t fi = 0; fi < result.filter_ids.size(); ++fi) {
            const auto& cell = result.mean_err_db[ti][fi];
            out << csv::format_double(result.target_snr_db[ti]) << ',' << result.filter_ids[fi] << ','
                << (cell ? csv::format_double(*cell) : std::string("missing")) << ',' << result.seeds_used[ti][fi]
                << '\n';
        }
    }
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace mmw::eval
