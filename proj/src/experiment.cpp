// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mmwsnr Authors

#include "mmwsnr/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <string>

#include "mmwsnr/calib.hpp"
#include "mmwsnr/error.hpp"
#include "mmwsnr/eval.hpp"
#include "mmwsnr/filters.hpp"
#include "mmwsnr/sounder.hpp"
#include "mmwsnr/units.hpp"

namespace mmw {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void prepare_output_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir.string() + "'");
    const fs::path probe = dir / ".mmwsnr_write_test";
    {
        std::ofstream out(probe);
        if (!out) throw IoError("output directory '" + dir.string() + "' is not writable");
    }
    fs::remove(probe, ec);
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

json schedule_json(const Scenario& sc) {
    const auto n_slots = scan_schedule(sc.sync, sc.horizon_s).size();
    return {{"slot_period_s", sc.sync.t_per_s},
            {"aligned_period_s", sc.sync.aligned_period_s()},
            {"n_slots", n_slots},
            {"sub_signal_energy_j", sub_signal_energy(sc.link.ptx_w, sc.sync)}};
}

json percentile_json(const ExperimentConfig& cfg, calib::Percentile p) {
    const auto profile = cfg.profile_for(p);
    const double rate = calib::mmwave_rate(profile);
    const double gamma_t = calib::target_snr(profile, rate);
    const double sync = calib::sync_level(gamma_t, profile.n_tx);
    return {{"percentile", std::string(calib::to_string(p))},
            {"rate_bps", rate},
            {"gamma_t_linear", gamma_t},
            {"gamma_t_db", linear_to_db(gamma_t)},
            {"sync_level_linear", sync},
            {"sync_level_db", linear_to_db(sync)}};
}

}  // namespace

RunOutputs run_trace(const ExperimentConfig& cfg) {
    cfg.validate();
    prepare_output_dir(cfg.output_dir);
    const Scenario& sc = cfg.scenario;
    RunOutputs outputs;

    json runs = json::array();
    for (const auto p : cfg.percentiles) {
        json pj = percentile_json(cfg, p);
        const double sync = pj["sync_level_linear"].get<double>();
        const std::string pname(calib::to_string(p));
        json seeds = json::array();
        for (const auto seed : cfg.seeds) {
            const Realization r = realize(sc, seed);
            const CalibratedTrack run = run_calibrated(r, sc, sync, seed);
            const std::string stem = pname + "_s" + std::to_string(seed);

            auto emit_trace = [&](const std::string& name, const SnrTrace& trace) {
                const fs::path path = cfg.output_dir / (stem + "_" + name + ".csv");
                write_snr_trace(path, trace);
                outputs.files.push_back(path);
            };
            emit_trace("true", run.tracks.truth);
            emit_trace("raw", run.tracks.raw);

            json filters = json::array();
            for (const auto& spec : cfg.filters) {
                const SnrTrace filtered = filter_trace(run.tracks.raw, spec);
                emit_trace("filtered_" + spec.id(), filtered);
                const auto series = eval::error_series(run.tracks.truth, filtered, eval::ErrorDomain::db);
                const fs::path cdf_path = cfg.output_dir / (stem + "_cdf_" + spec.id() + ".csv");
                eval::write_cdf_csv(cdf_path, eval::error_cdf(series, cfg.cdf_points));
                outputs.files.push_back(cdf_path);
                filters.push_back({{"id", spec.id()}, {"mean_err_db", series.mean(std::min(cfg.eval_skip, series.err.size() - 1))}});
            }
            seeds.push_back({{"seed", seed},
                             {"beta", run.beta},
                             {"direction", r.direction},
                             {"path_count", r.state.pathset().size()},
                             {"blockage", r.state.blockage().label()},
                             {"n_samples", run.tracks.raw.size()},
                             {"filters", filters}});
        }
        pj["seeds"] = seeds;
        runs.push_back(pj);
    }

    const fs::path manifest = cfg.output_dir / "trace_manifest.json";
    write_json(manifest, {{"command", "trace"}, {"config", to_json(cfg)}, {"schedule", schedule_json(sc)}, {"runs", runs}});
    outputs.files.push_back(manifest);
    return outputs;
}

RunOutputs run_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.filters.empty()) throw ConfigError("filters: sweep needs at least one filter");
    prepare_output_dir(cfg.output_dir);
    const auto targets = cfg.sweep.values();
    const eval::SweepOptions options{cfg.rate.n_tx, cfg.eval_skip};
    const auto result = eval::sweep_target_snr(cfg.scenario, cfg.filters, targets, cfg.seeds, options);

    RunOutputs outputs;
    const fs::path csv_path = cfg.output_dir / "sweep.csv";
    eval::write_sweep_csv(csv_path, result);
    outputs.files.push_back(csv_path);

    json cells = json::array();
    for (std::size_t ti = 0; ti < targets.size(); ++ti) {
        const double sync = calib::sync_level(db_to_linear(targets[ti]), cfg.rate.n_tx);
        json betas = json::array();
        for (const auto& b : result.beta[ti]) betas.push_back(b ? json(*b) : json(nullptr));
        cells.push_back({{"target_snr_db", targets[ti]},
                         {"sync_level_db", linear_to_db(sync)},
                         {"beta_per_seed", betas}});
    }
    json percentiles = json::array();
    for (const auto p : {calib::Percentile::p50, calib::Percentile::p5}) percentiles.push_back(percentile_json(cfg, p));

    const fs::path manifest = cfg.output_dir / "sweep_manifest.json";
    write_json(manifest, {{"command", "sweep"},
                          {"config", to_json(cfg)},
                          {"schedule", schedule_json(cfg.scenario)},
                          {"reference_targets", percentiles},
                          {"cells", cells}});
    outputs.files.push_back(manifest);
    return outputs;
}

SounderDemoResult run_sounder_demo(const ExperimentConfig& cfg) {
    cfg.validate();
    prepare_output_dir(cfg.output_dir);
    const auto& sd = cfg.sounder;
    const auto& scfg = sd.sounder;
    SounderDemoResult result;

    const fs::path pdp_path = cfg.output_dir / "sounder_pdp.csv";
    std::ofstream pdp_out(pdp_path);
    if (!pdp_out) throw IoError("cannot write '" + pdp_path.string() + "'");
    sounder::write_pdp_header(pdp_out, scfg.n_points);

    std::vector<double> peaks;
    std::vector<int> cfo_counts(static_cast<std::size_t>(scfg.cfo_hypotheses), 0);
    const auto grid = scfg.cfo_grid();
    double frame_period = scfg.frame_period_s;
    json source;

    auto record = [&](const sounder::PdpFrame& f, std::size_t index) {
        peaks.push_back(*std::max_element(f.bins.begin(), f.bins.end()));
        const auto hyp = std::min_element(grid.begin(), grid.end(), [&](double a, double b) {
            return std::abs(a - f.chosen_cfo_hz) < std::abs(b - f.chosen_cfo_hz);
        });
        ++cfo_counts[static_cast<std::size_t>(hyp - grid.begin())];
        if (index % static_cast<std::size_t>(sd.pdp_export_every) == 0) sounder::write_pdp_row(pdp_out, f);
    };

    if (sd.capture_file) {
        const sounder::Capture cap = sounder::read_capture(*sd.capture_file);
        if (static_cast<int>(cap.n_points()) != scfg.n_points)
            throw ConfigError("sounder.n_points does not match the capture (" + std::to_string(cap.n_points()) + ")");
        const auto frames = sounder::estimate_pdp(cap, scfg);
        if (frames.size() < 2) throw ConfigError("capture holds fewer than two averaging windows");
        frame_period = frames[1].t_s - frames[0].t_s;
        for (std::size_t i = 0; i < frames.size(); ++i) record(frames[i], i);
        source = {{"capture_file", sd.capture_file->generic_string()}};
    } else {
        std::shared_ptr<const blockage::BlockageTrace> h = cfg.scenario.blockage.measured;
        if (!h) {
            auto spec = cfg.scenario.blockage.synthetic;
            spec.seed = sd.seed;
            h = std::make_shared<const blockage::BlockageTrace>(blockage::synthesize_trace(spec));
        }
        const sounder::CaptureSynthesizer synth(sd.taps, sd.cfo_hz, sd.snr_db, scfg, sd.seed);
        const sounder::PdpEstimator estimator(scfg, synth.known_sequence(), scfg.sample_rate_hz);
        const auto n_frames = static_cast<std::size_t>(std::llround(sd.duration_s / frame_period));
        if (n_frames < 2) throw ConfigError("sounder.duration_s is shorter than two frame periods");

        // Windows are independent; synthesize and estimate a batch at a time
        // so memory stays bounded, then record in frame order.
        constexpr std::size_t kBatch = 1024;
        std::vector<sounder::PdpFrame> batch(kBatch);
        std::exception_ptr failure;
        for (std::size_t first = 0; first < n_frames; first += kBatch) {
            const auto count = static_cast<long long>(std::min(kBatch, n_frames - first));
#pragma omp parallel for schedule(static)
            for (long long k = 0; k < count; ++k) {
                try {
                    const std::size_t index = first + static_cast<std::size_t>(k);
                    const double t = static_cast<double>(index) * frame_period;
                    const double scale = h->at(std::min(t, h->last_time_s()));
                    const auto cap = synth.window(t, scfg.avg_symbols, scale, index);
                    batch[static_cast<std::size_t>(k)] = estimator.estimate(cap.samples, t);
                } catch (...) {
#pragma omp critical
                    if (!failure) failure = std::current_exception();
                }
            }
            if (failure) std::rethrow_exception(failure);
            for (long long k = 0; k < count; ++k) record(batch[static_cast<std::size_t>(k)], first + static_cast<std::size_t>(k));
        }
        const fs::path truth_path = cfg.output_dir / "sounder_truth_blockage.csv";
        blockage::write_trace(truth_path, *h);
        result.outputs.files.push_back(truth_path);
        json taps = json::array();
        for (const auto& t : sd.taps) taps.push_back({{"delay", t.delay_samples}, {"power_db", linear_to_db(std::norm(t.gain))}});
        source = {{"synthetic", true},
                  {"blockage", h->label()},
                  {"noise_variance", synth.noise_variance()},
                  {"taps", taps}};
    }
    pdp_out.close();
    if (!pdp_out) throw IoError("write failed for '" + pdp_path.string() + "'");
    result.outputs.files.push_back(pdp_path);

    const auto trace = sounder::blockage_from_peaks(peaks, frame_period, scfg.decimation);
    const fs::path trace_path = cfg.output_dir / "sounder_blockage.csv";
    blockage::write_trace(trace_path, trace);
    result.outputs.files.push_back(trace_path);

    result.n_frames = peaks.size();
    result.n_blockage_samples = trace.size();
    result.blockage_period_s = trace.sample_period_s();

    json hist = json::array();
    for (std::size_t i = 0; i < grid.size(); ++i) hist.push_back({{"cfo_hz", grid[i]}, {"frames", cfo_counts[i]}});
    const fs::path manifest = cfg.output_dir / "sounder_manifest.json";
    write_json(manifest, {{"command", "sounder"},
                          {"config", to_json(cfg)},
                          {"source", source},
                          {"frame_period_s", frame_period},
                          {"n_frames", result.n_frames},
                          {"blockage_samples", result.n_blockage_samples},
                          {"blockage_period_s", result.blockage_period_s},
                          {"cfo_histogram", hist}});
    result.outputs.files.push_back(manifest);
    return result;
}

namespace {

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

int selfcheck(std::ostream& log) {
    int failures = 0;
    auto check = [&](const char* name, const std::function<bool()>& body) {
        bool ok = false;
        try {
            ok = body();
        } catch (const std::exception& e) {
            log << "  error: " << e.what() << '\n';
        }
        log << (ok ? "ok   " : "FAIL ") << name << '\n';
        if (!ok) ++failures;
    };

    check("moving average warm-up", [] {
        const SnrTrace raw({0.0, 1.0, 2.0, 3.0}, {1, 2, 3, 4}, TraceKind::raw);
        const auto out = filter_trace(raw, FilterSpec::moving_average(3)).values();
        return out == std::vector<double>{1.0, 1.5, 2.0, 3.0};
    });
    check("first-order step response", [] {
        const SnrTrace raw({0.0, 1.0, 2.0, 3.0}, {0, 1, 1, 1}, TraceKind::raw);
        const auto out = filter_trace(raw, FilterSpec::first_order(0.5)).values();
        return out == std::vector<double>{0.0, 0.5, 0.75, 0.875};
    });
    check("aligned schedule has 625 samples in 10 s", [] {
        const auto times = aligned_times(SyncConfig{}, 3, 10.0);
        return times.size() == 625 && near(times[1] - times[0], 16e-3, 1e-12);
    });
    check("rate targets match the reference table", [] {
        const double r50 = calib::mmwave_rate(calib::RateProfile::defaults(calib::Percentile::p50));
        const double r5 = calib::mmwave_rate(calib::RateProfile::defaults(calib::Percentile::p5));
        return std::abs(r50 / 1480e6 - 1.0) <= 0.015 && std::abs(r5 / 70e6 - 1.0) <= 0.015;
    });
    check("closed-form band gain matches a fine grid", [] {
        ScenarioConfig sc;
        sc.seed = 7;
        const ArrayGeometry g{2, 2, 0.5};
        const PathSet paths = assign_doppler(generate_pathset(sc, g, g), sc);
        auto trace = std::make_shared<const blockage::BlockageTrace>(std::vector<double>{1.0, 1.0}, 1.0);
        const ChannelState state(paths, trace, 1.0, sc.band());
        const BeamformedChannel ch(state, SteeringVector::single_element(4), SteeringVector::single_element(4));
        const double exact = ch.band_gain_exact(0.3);
        const double grid = ch.band_gain_grid(0.3, 200000);
        return near(exact, grid, 1e-6 * std::max(exact, 1e-30));
    });
    check("synthetic blockage stays within depth", [] {
        auto spec = blockage::BlockageEventSpec::defaults(blockage::EventKind::plate);
        spec.seed = 3;
        const auto trace = blockage::synthesize_trace(spec);
        const double floor = db_to_linear(-spec.depth_db);
        return trace.size() == 78125 && std::all_of(trace.samples().begin(), trace.samples().end(), [&](double v) {
                   return v <= 1.0 && v >= floor * (1.0 - 1e-12);
               });
    });
    check("noiseless sounder recovers tap delay", [] {
        const sounder::SounderConfig sc;
        const std::vector<sounder::Tap> taps{{5, {0.2, 0.1}}, {17, {0.9, -0.3}}};
        const auto cap = sounder::make_capture(taps, 12.5e3, std::numeric_limits<double>::infinity(),
                                               sc.avg_symbols, sc, 1);
        const auto frames = sounder::estimate_pdp(cap, sc);
        const auto& bins = frames.front().bins;
        const auto peak = std::max_element(bins.begin(), bins.end()) - bins.begin();
        return peak == 17 && near(bins[17], std::norm(taps[1].gain), 1e-9) &&
               near(frames.front().chosen_cfo_hz, 12.5e3, 1e-9);
    });
    check("parallel and serial PDP agree", [] {
        const sounder::SounderConfig sc;
        const std::vector<sounder::Tap> taps{{0, {1.0, 0.0}}, {9, {0.4, 0.2}}};
        const auto cap = sounder::make_capture(taps, -21e3, 15.0, 3 * sc.avg_symbols, sc, 2);
        const auto fast = sounder::estimate_pdp(cap, sc);
        const auto slow = sounder::estimate_pdp_serial(cap, sc);
        if (fast.size() != slow.size()) return false;
        for (std::size_t i = 0; i < fast.size(); ++i) {
            if (fast[i].chosen_cfo_hz != slow[i].chosen_cfo_hz) return false;
            for (std::size_t d = 0; d < fast[i].bins.size(); ++d)
                if (!near(fast[i].bins[d], slow[i].bins[d], 1e-9 * (1.0 + slow[i].bins[d]))) return false;
        }
        return true;
    });
    check("unknown config keys are rejected", [] {
        try {
            parse_config("[scenario]\ncarrier_hz = 28e9\ncarier_hz = 1\n");
        } catch (const ConfigError&) {
            return true;
        }
        return false;
    });
    return failures;
}

}  // namespace mmw
