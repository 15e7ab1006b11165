// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mmwsnr Authors

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <vector>

#include "mmwsnr/arrays.hpp"
#include "mmwsnr/blockage.hpp"

namespace mmw::sounder {

struct SounderConfig {
    int n_points = 128;             // samples per symbol
    double sample_rate_hz = 130e6;
    int avg_symbols = 32;           // symbols coherently averaged per PDP
    int cfo_hypotheses = 9;         // odd, uniformly spaced over [-span, +span]
    double cfo_span_hz = 50e3;
    int decimation = 4;             // keep every decimation-th PDP
    // Spacing of successive averaging windows when synthesizing a long
    // recording. The hardware delivers one averaged response per 32 us even
    // though 32 symbols of 128 samples at 130 MHz last 31.5 us.
    double frame_period_s = 32e-6;

    double symbol_period_s() const { return n_points / sample_rate_hz; }
    double window_length_s() const { return avg_symbols * symbol_period_s(); }
    // CFO hypothesis grid, ascending.
    std::vector<double> cfo_grid() const;
    void validate() const;
};

struct Tap {
    int delay_samples = 0;
    cplx gain{1.0, 0.0};
};

// Received samples plus the frequency-domain QPSK sequence whose IFFT was
// transmitted periodically.
struct Capture {
    std::vector<cplx> samples;
    std::vector<cplx> known_sequence;  // unit-magnitude QPSK, length n_points
    double sample_rate_hz = 130e6;
    double start_time_s = 0.0;

    std::size_t n_points() const { return known_sequence.size(); }
    std::size_t n_symbols() const { return known_sequence.empty() ? 0 : samples.size() / known_sequence.size(); }
};

struct PdpFrame {
    std::vector<double> bins;  // |h[d]|^2, d = 0 .. n_points-1
    double t_s = 0.0;
    double chosen_cfo_hz = 0.0;
};

// Pseudo-random unit-magnitude QPSK symbols.
std::vector<cplx> qpsk_sequence(int n_points, std::uint64_t seed = 0x51D0);

// Time-domain symbol x = (1/sqrt(N)) * IDFT(X); unit average power.
std::vector<cplx> transmit_symbol(std::span<const cplx> known_sequence);

// Synthesizes captures window by window. Noise power is fixed by snr_db
// relative to the unscaled tap set, so scaling a window's power (blockage)
// lowers its SNR. Each window draws noise from its own seeded stream, so
// windows can be generated in any order.
class CaptureSynthesizer {
public:
    CaptureSynthesizer(std::vector<Tap> taps, double cfo_hz, double snr_db, const SounderConfig& cfg,
                       std::uint64_t seed);

    // n_symbols symbols starting at start_time_s with every tap's power
    // multiplied by power_scale. window_index selects the noise stream.
    Capture window(double start_time_s, int n_symbols, double power_scale, std::uint64_t window_index) const;

    const std::vector<cplx>& known_sequence() const { return known_; }
    double noise_variance() const { return noise_var_; }

private:
    std::vector<Tap> taps_;
    double cfo_hz_;
    double noise_var_;
    SounderConfig cfg_;
    std::uint64_t seed_;
    std::vector<cplx> known_;
    std::vector<cplx> rx_symbol_;  // transmit symbol circularly convolved with the taps
};

// Periodic sequence through the taps, CFO rotation exp(2 pi j cfo t), and
// complex Gaussian noise at snr_db (infinite SNR disables noise).
Capture make_capture(const std::vector<Tap>& taps, double cfo_hz, double snr_db, int n_symbols,
                     const SounderConfig& cfg, std::uint64_t seed);

// One PDP per avg_symbols block: for each CFO hypothesis derotate, take
// per-symbol spectra, divide by the known spectrum, average, return to the
// delay domain and keep the hypothesis with the largest peak. Blocks are
// processed in an OpenMP loop.
// Fast-path estimator for one averaging window at a time. The derotation
// tables depend only on the configuration and the known sequence, so one
// instance serves a whole recording; estimate() is safe to call concurrently.
class PdpEstimator {
public:
    PdpEstimator(const SounderConfig& cfg, std::span<const cplx> known_sequence, double sample_rate_hz);
    ~PdpEstimator();
    PdpEstimator(PdpEstimator&&) noexcept;

    // `window` holds avg_symbols * n_points samples.
    PdpFrame estimate(std::span<const cplx> window, double t_s) const;

private:
    struct Impl;
    std::unique_ptr<const Impl> impl_;
};

std::vector<PdpFrame> estimate_pdp(const Capture& cap, const SounderConfig& cfg);

// Single-threaded reference that follows the per-symbol description
// literally (one FFT per symbol and hypothesis).
std::vector<PdpFrame> estimate_pdp_serial(const Capture& cap, const SounderConfig& cfg);

// Largest bin of each frame.
std::vector<double> peak_powers(std::span<const PdpFrame> frames);

// Keep every decimation-th peak, scale to unit median.
blockage::BlockageTrace blockage_from_peaks(std::span<const double> peaks, double frame_period_s, int decimation);

// Peak-power trace from PDP frames on the frames' own time grid.
blockage::BlockageTrace extract_blockage(std::span<const PdpFrame> frames, const SounderConfig& cfg);

// Capture file: 8-byte magic "MMWCAP01", u32 n_points, u32 reserved,
// f64 sample_rate_hz, u64 n_symbols, then the known sequence and the
// samples as interleaved little-endian f32 I/Q pairs.
void write_capture(const std::filesystem::path& path, const Capture& cap);
Capture read_capture(const std::filesystem::path& path);

// PDP CSV: t_s, bin0 .. bin{N-1}, chosen_cfo_hz.
void write_pdp_header(std::ostream& out, int n_points);
void write_pdp_row(std::ostream& out, const PdpFrame& frame);

}  // namespace mmw::sounder
