// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mmwsnr Authors

#include "mmwsnr/syncsig.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <random>

#include "mmwsnr/csv.hpp"
#include "mmwsnr/error.hpp"

namespace mmw {

void SyncConfig::validate(double bandwidth_hz) const {
    if (!(t_per_s > 0.0)) throw ConfigError("sync.t_per_s must be > 0");
    if (!(t_sig_s > 0.0)) throw ConfigError("sync.t_sig_s must be > 0");
    if (!(t_sig_s < t_per_s)) throw ConfigError("sync.t_sig_s must be shorter than sync.t_per_s");
    if (n_sig < 1) throw ConfigError("sync.n_sig must be >= 1");
    if (!(w_sig_hz > 0.0)) throw ConfigError("sync.w_sig_hz must be > 0");
    if (n_sig * w_sig_hz > bandwidth_hz) throw ConfigError("sync.n_sig * sync.w_sig_hz exceeds the system bandwidth");
    if (n_dir < 1) throw ConfigError("sync.n_dir must be >= 1");
}

std::string_view to_string(SubSignalPlacement placement) {
    return placement == SubSignalPlacement::comb ? "comb" : "uniform_random";
}

SubSignalPlacement parse_placement(std::string_view text) {
    if (text == "uniform_random") return SubSignalPlacement::uniform_random;
    if (text == "comb") return SubSignalPlacement::comb;
    throw ConfigError("unknown sub-signal placement '" + std::string(text) + "' (uniform_random|comb)");
}

std::string_view to_string(TraceKind kind) {
    switch (kind) {
        case TraceKind::true_snr: return "true_snr";
        case TraceKind::raw: return "raw";
        case TraceKind::filtered: return "filtered";
    }
    return "unknown";
}

TraceKind parse_trace_kind(std::string_view text) {
    if (text == "true_snr") return TraceKind::true_snr;
    if (text == "raw") return TraceKind::raw;
    if (text == "filtered") return TraceKind::filtered;
    throw ParseError("unknown trace kind '" + std::string(text) + "'");
}

SnrTrace::SnrTrace(std::vector<double> t, std::vector<double> values, TraceKind kind)
    : t_(std::move(t)), values_(std::move(values)), kind_(kind) {
    if (t_.size() != values_.size()) throw ConfigError("SNR trace time and value lengths differ");
    if (t_.size() >= 2) {
        const double step = t_[1] - t_[0];
        if (!(step > 0.0)) throw ConfigError("SNR trace times must be strictly increasing");
        for (std::size_t i = 1; i < t_.size(); ++i) {
            if (std::abs((t_[i] - t_[i - 1]) - step) > 1e-12)
                throw ConfigError("SNR trace times must be uniformly spaced");
        }
    }
}

bool SnrTrace::same_grid(const SnrTrace& other) const {
    if (t_.size() != other.t_.size()) return false;
    for (std::size_t i = 0; i < t_.size(); ++i)
        if (std::abs(t_[i] - other.t_[i]) > 1e-12) return false;
    return true;
}

void write_snr_trace(const std::filesystem::path& path, const SnrTrace& trace) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write SNR trace '" + path.string() + "'");
    const auto kind = to_string(trace.kind());
    out << "t_s,value_linear,kind\n";
    for (std::size_t i = 0; i < trace.size(); ++i)
        out << csv::format_double(trace.t()[i]) << ',' << csv::format_double(trace.values()[i]) << ',' << kind << '\n';
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

SnrTrace read_snr_trace(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open SNR trace '" + path.string() + "'");
    std::string line;
    std::size_t line_no = 0;
    std::vector<double> t, v;
    std::optional<TraceKind> kind;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = csv::trim(line);
        if (line_no == 1) {
            if (text != "t_s,value_linear,kind") throw ParseError("expected header 't_s,value_linear,kind'", line_no);
            continue;
        }
        if (text.empty()) continue;
        const auto fields = csv::split(text);
        if (fields.size() != 3) throw ParseError("expected 3 fields", line_no);
        t.push_back(csv::parse_double(fields[0], line_no));
        v.push_back(csv::parse_double(fields[1], line_no));
        const TraceKind k = parse_trace_kind(fields[2]);
        if (kind && *kind != k) throw ParseError("mixed trace kinds", line_no);
        kind = k;
    }
    if (line_no == 0) throw ParseError("empty SNR trace file '" + path.string() + "'");
    return SnrTrace(std::move(t), std::move(v), kind.value_or(TraceKind::raw));
}

double sub_signal_energy(double ptx_w, const SyncConfig& cfg) { return ptx_w * cfg.t_sig_s / cfg.n_sig; }

RawMeasurement measure_once(const BeamformedChannel& channel, double t, int direction_index, const SyncConfig& cfg,
                            const LinkBudget& link, Rng& rng) {
    const Band& band = channel.band();
    const double n0 = link.n0_w_per_hz;
    const double sqrt_es = std::sqrt(sub_signal_energy(link.ptx_w, cfg));

    std::uniform_real_distribution<double> freq(band.low_hz(), band.high_hz());
    std::normal_distribution<double> noise(0.0, std::sqrt(0.5 * n0));

    RawMeasurement m;
    m.t_s = t;
    m.direction_index = direction_index;
    m.z.reserve(static_cast<std::size_t>(cfg.n_sig));
    double acc = 0.0;
    for (int k = 0; k < cfg.n_sig; ++k) {
        const double f = cfg.placement == SubSignalPlacement::uniform_random
                             ? freq(rng)
                             : band.low_hz() + (k + 0.5) * band.width_hz / cfg.n_sig;
        const double re = noise(rng);
        const double im = noise(rng);
        const cplx z = sqrt_es * channel.response(t, f) + cplx{re, im};
        m.z.push_back(z);
        acc += std::norm(z) - n0;
    }
    m.gamma_hat = acc / (n0 * cfg.t_sig_s * band.width_hz);
    return m;
}

RawMeasurement measure_once(const ChannelState& state, double t, const SteeringVector& w_tx,
                            const SteeringVector& w_rx, const SyncConfig& cfg, const LinkBudget& link, Rng& rng) {
    return measure_once(BeamformedChannel(state, w_tx, w_rx), t, 0, cfg, link, rng);
}

std::vector<ScheduleSlot> scan_schedule(const SyncConfig& cfg, double horizon_s) {
    if (!(horizon_s > 0.0)) throw ConfigError("schedule horizon must be > 0");
    if (cfg.n_dir < 1 || !(cfg.t_per_s > 0.0)) throw ConfigError("invalid sync configuration");
    std::vector<ScheduleSlot> slots;
    // Slot j at j * T_per; the small tolerance keeps a slot that lands on the
    // horizon by round-off out of the schedule.
    for (long long j = 0;; ++j) {
        const double t = static_cast<double>(j) * cfg.t_per_s;
        if (t >= horizon_s - 1e-12) break;
        slots.push_back({t, static_cast<int>(j % cfg.n_dir)});
    }
    return slots;
}

std::vector<double> aligned_times(const SyncConfig& cfg, int direction_index, double horizon_s) {
    if (direction_index < 0 || direction_index >= cfg.n_dir)
        throw ConfigError("direction index " + std::to_string(direction_index) + " outside [0, n_dir)");
    std::vector<double> t;
    for (long long j = 0;; ++j) {
        const double ti = static_cast<double>(direction_index + j * cfg.n_dir) * cfg.t_per_s;
        if (ti >= horizon_s - 1e-12) break;
        t.push_back(ti);
    }
    return t;
}

TrackResult track_direction(const ChannelState& state, const SyncConfig& cfg, int direction_index,
                            const BeamCodebook& codebook, const SteeringVector& w_tx, const LinkBudget& link,
                            double horizon_s, std::uint64_t seed, const SnrIntegration& integration) {
    if (static_cast<std::size_t>(cfg.n_dir) != codebook.size())
        throw ConfigError("codebook size does not match sync.n_dir");
    const auto times = aligned_times(cfg, direction_index, horizon_s);
    const BeamformedChannel channel(state, w_tx, codebook.beams[static_cast<std::size_t>(direction_index)]);
    const double snr_scale = link.ptx_w / (link.n0_w_per_hz * state.band().width_hz);

    Rng rng = make_rng(seed, Stream::measurement);
    std::vector<double> raw, truth;
    raw.reserve(times.size());
    truth.reserve(times.size());
    for (const double t : times) {
        raw.push_back(measure_once(channel, t, direction_index, cfg, link, rng).gamma_hat);
        truth.push_back(channel.band_gain(t, integration) * snr_scale);
    }
    return {SnrTrace(times, std::move(raw), TraceKind::raw), SnrTrace(times, std::move(truth), TraceKind::true_snr)};
}

}  // namespace mmw
