// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mmwsnr Authors

#include "mmwsnr/sounder.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <exception>
#include <numeric>
#include <random>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>

#include "fft.hpp"
#include "mmwsnr/error.hpp"
#include "mmwsnr/rng.hpp"
#include "mmwsnr/units.hpp"

namespace mmw::sounder {

namespace {

cplx unit_phasor(double cycles) {
    const double frac = cycles - std::floor(cycles);
    return std::polar(1.0, kTwoPi * frac);
}

// Visit order for the CFO search: increasing |f|, negative first on ties, so
// that strict-improvement selection breaks ties toward the smaller offset.
std::vector<std::size_t> search_order(const std::vector<double>& grid) {
    std::vector<std::size_t> order(grid.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (std::abs(grid[a]) != std::abs(grid[b])) return std::abs(grid[a]) < std::abs(grid[b]);
        return grid[a] < grid[b];
    });
    return order;
}

void check_capture(const Capture& cap, const SounderConfig& cfg) {
    cfg.validate();
    if (cap.n_points() != static_cast<std::size_t>(cfg.n_points))
        throw ConfigError("capture symbol length " + std::to_string(cap.n_points()) + " does not match sounder.n_points");
    if (cap.samples.size() % cap.n_points() != 0)
        throw ConfigError("capture length is not a whole number of symbols");
    if (cap.n_symbols() < static_cast<std::size_t>(cfg.avg_symbols))
        throw ConfigError("capture shorter than one averaging window of " + std::to_string(cfg.avg_symbols) + " symbols");
}

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

}  // namespace

std::vector<double> SounderConfig::cfo_grid() const {
    std::vector<double> grid(static_cast<std::size_t>(cfo_hypotheses));
    if (cfo_hypotheses == 1) {
        grid[0] = 0.0;
        return grid;
    }
    for (int h = 0; h < cfo_hypotheses; ++h)
        grid[static_cast<std::size_t>(h)] = -cfo_span_hz + 2.0 * cfo_span_hz * h / (cfo_hypotheses - 1);
    return grid;
}

void SounderConfig::validate() const {
    if (n_points < 2 || !std::has_single_bit(static_cast<unsigned>(n_points)))
        throw ConfigError("sounder.n_points must be a power of two >= 2");
    if (!(sample_rate_hz > 0.0)) throw ConfigError("sounder.sample_rate_hz must be > 0");
    if (avg_symbols < 1) throw ConfigError("sounder.avg_symbols must be >= 1");
    if (cfo_hypotheses < 1 || cfo_hypotheses % 2 == 0) throw ConfigError("sounder.cfo_hypotheses must be odd and >= 1");
    if (!(cfo_span_hz >= 0.0)) throw ConfigError("sounder.cfo_span_hz must be >= 0");
    if (decimation < 1) throw ConfigError("sounder.decimation must be >= 1");
    if (!(frame_period_s >= window_length_s() * (1.0 - 1e-12)))
        throw ConfigError("sounder.frame_period_s is shorter than one averaging window");
}

std::vector<cplx> qpsk_sequence(int n_points, std::uint64_t seed) {
    Rng rng = make_rng(seed, Stream::capture, 0xFFFF'FFFF'FFFFull);
    std::uniform_int_distribution<int> quadrant(0, 3);
    std::vector<cplx> seq(static_cast<std::size_t>(n_points));
    for (auto& s : seq) s = std::polar(1.0, std::numbers::pi / 4.0 * (2 * quadrant(rng) + 1));
    return seq;
}

std::vector<cplx> transmit_symbol(std::span<const cplx> known_sequence) {
    const int n = static_cast<int>(known_sequence.size());
    const detail::Fft fft(n);
    std::vector<cplx> x(known_sequence.size());
    fft.backward(known_sequence, x);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (auto& v : x) v *= scale;
    return x;
}

CaptureSynthesizer::CaptureSynthesizer(std::vector<Tap> taps, double cfo_hz, double snr_db,
                                       const SounderConfig& cfg, std::uint64_t seed)
    : taps_(std::move(taps)), cfo_hz_(cfo_hz), noise_var_(0.0), cfg_(cfg), seed_(seed) {
    cfg_.validate();
    if (taps_.empty()) throw ConfigError("sounder capture needs at least one tap");
    double tap_power = 0.0;
    for (const auto& tap : taps_) {
        if (tap.delay_samples < 0 || tap.delay_samples >= cfg_.n_points)
            throw ConfigError("tap delay " + std::to_string(tap.delay_samples) + " outside [0, n_points)");
        tap_power += std::norm(tap.gain);
    }
    if (!(tap_power > 0.0)) throw ConfigError("sounder taps carry no power");
    if (std::isnan(snr_db)) throw ConfigError("sounder snr_db is NaN");
    if (std::isfinite(snr_db) || snr_db < 0.0) noise_var_ = tap_power / db_to_linear(snr_db);

    known_ = qpsk_sequence(cfg_.n_points);
    const auto x = transmit_symbol(known_);
    const auto n = static_cast<std::size_t>(cfg_.n_points);
    rx_symbol_.assign(n, cplx{0.0, 0.0});
    for (const auto& tap : taps_) {
        for (std::size_t i = 0; i < n; ++i)
            rx_symbol_[i] += tap.gain * x[(i + n - static_cast<std::size_t>(tap.delay_samples)) % n];
    }
}

Capture CaptureSynthesizer::window(double start_time_s, int n_symbols, double power_scale,
                                   std::uint64_t window_index) const {
    if (n_symbols < 1) throw ConfigError("capture needs at least one symbol");
    if (!(power_scale >= 0.0)) throw ConfigError("capture power scale must be >= 0");
    const auto n = static_cast<std::size_t>(cfg_.n_points);
    const double fs = cfg_.sample_rate_hz;
    const double amp = std::sqrt(power_scale);
    const cplx step = unit_phasor(cfo_hz_ / fs);

    Capture cap;
    cap.known_sequence = known_;
    cap.sample_rate_hz = fs;
    cap.start_time_s = start_time_s;
    cap.samples.resize(n * static_cast<std::size_t>(n_symbols));

    // Same stream layout as make_rng; boost's engine draws normals faster.
    std::seed_seq seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
                      static_cast<std::uint32_t>(Stream::capture), static_cast<std::uint32_t>(window_index),
                      static_cast<std::uint32_t>(window_index >> 32)};
    boost::random::mt19937_64 rng(seq);
    boost::random::normal_distribution<double> noise(0.0, std::sqrt(0.5 * noise_var_));
    for (int s = 0; s < n_symbols; ++s) {
        // Exact phase at each symbol start, recurrence within the symbol.
        const double t0 = start_time_s + static_cast<double>(s) * static_cast<double>(n) / fs;
        cplx rot = unit_phasor(cfo_hz_ * t0);
        cplx* out = cap.samples.data() + static_cast<std::size_t>(s) * n;
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = amp * rx_symbol_[i] * rot;
            rot *= step;
        }
        if (noise_var_ > 0.0) {
            for (std::size_t i = 0; i < n; ++i) {
                const double re = noise(rng);
                const double im = noise(rng);
                out[i] += cplx{re, im};
            }
        }
    }
    return cap;
}

Capture make_capture(const std::vector<Tap>& taps, double cfo_hz, double snr_db, int n_symbols,
                     const SounderConfig& cfg, std::uint64_t seed) {
    const CaptureSynthesizer synth(std::vector<Tap>(taps.begin(), taps.end()), cfo_hz, snr_db, cfg, seed);
    return synth.window(0.0, n_symbols, 1.0, 0);
}

struct PdpEstimator::Impl {
    std::size_t n = 0;
    std::size_t avg = 0;
    std::vector<double> grid;
    std::vector<std::size_t> order;
    detail::Fft fft;
    std::vector<cplx> ref;
    std::vector<cplx> symbol_phase;  // [hypothesis][symbol]
    std::vector<cplx> sample_ramp;   // [hypothesis][sample]

    explicit Impl(int n_points) : fft(n_points) {}
};

PdpEstimator::PdpEstimator(const SounderConfig& cfg, std::span<const cplx> known_sequence, double sample_rate_hz) {
    cfg.validate();
    if (known_sequence.size() != static_cast<std::size_t>(cfg.n_points))
        throw ConfigError("known sequence length does not match sounder.n_points");
    if (!(sample_rate_hz > 0.0)) throw ConfigError("sample rate must be > 0");
    auto impl = std::make_unique<Impl>(cfg.n_points);
    impl->n = static_cast<std::size_t>(cfg.n_points);
    impl->avg = static_cast<std::size_t>(cfg.avg_symbols);
    impl->grid = cfg.cfo_grid();
    impl->order = search_order(impl->grid);
    const std::size_t n = impl->n, avg = impl->avg, n_hyp = impl->grid.size();

    // Known spectrum as transmitted, scaled so that dividing the averaged sum
    // of symbol spectra yields the channel frequency response directly.
    impl->ref.resize(n);
    impl->fft.forward(transmit_symbol(known_sequence), impl->ref);
    for (auto& r : impl->ref) r *= static_cast<double>(avg);

    // Derotation by hypothesis f factors into a per-symbol phase
    // exp(-2 pi j f s N / fs) and a within-symbol ramp exp(-2 pi j f n / fs),
    // so the symbols are combined first and transformed once per hypothesis.
    impl->symbol_phase.resize(n_hyp * avg);
    impl->sample_ramp.resize(n_hyp * n);
    for (std::size_t h = 0; h < n_hyp; ++h) {
        const double f = impl->grid[h];
        for (std::size_t s = 0; s < avg; ++s)
            impl->symbol_phase[h * avg + s] = unit_phasor(-f * static_cast<double>(s * n) / sample_rate_hz);
        for (std::size_t i = 0; i < n; ++i)
            impl->sample_ramp[h * n + i] = unit_phasor(-f * static_cast<double>(i) / sample_rate_hz);
    }
    impl_ = std::move(impl);
}

PdpEstimator::~PdpEstimator() = default;
PdpEstimator::PdpEstimator(PdpEstimator&&) noexcept = default;

PdpFrame PdpEstimator::estimate(std::span<const cplx> window, double t_s) const {
    const Impl& m = *impl_;
    const std::size_t n = m.n, avg = m.avg;
    if (window.size() != n * avg) throw DimensionError("PDP window must hold avg_symbols * n_points samples");
    std::vector<cplx> acc(n), spec(n), imp(n);
    std::vector<double> bins(n);
    PdpFrame frame;
    frame.t_s = t_s;
    double best_peak = -1.0;
    const double inv_n2 = 1.0 / static_cast<double>(n * n);
    for (const std::size_t h : m.order) {
        std::fill(acc.begin(), acc.end(), cplx{0.0, 0.0});
        for (std::size_t s = 0; s < avg; ++s) {
            const cplx w = m.symbol_phase[h * avg + s];
            const cplx* sym = window.data() + s * n;
            for (std::size_t i = 0; i < n; ++i) acc[i] += w * sym[i];
        }
        for (std::size_t i = 0; i < n; ++i) acc[i] *= m.sample_ramp[h * n + i];
        m.fft.forward(acc, spec);
        for (std::size_t k = 0; k < n; ++k) spec[k] /= m.ref[k];
        m.fft.backward(spec, imp);
        for (std::size_t d = 0; d < n; ++d) bins[d] = std::norm(imp[d]) * inv_n2;
        const double peak = max_of(bins);
        if (peak > best_peak) {
            best_peak = peak;
            frame.bins = bins;
            frame.chosen_cfo_hz = m.grid[h];
        }
    }
    return frame;
}

std::vector<PdpFrame> estimate_pdp(const Capture& cap, const SounderConfig& cfg) {
    check_capture(cap, cfg);
    const std::size_t block = static_cast<std::size_t>(cfg.avg_symbols) * static_cast<std::size_t>(cfg.n_points);
    const std::size_t n_frames = cap.n_symbols() / static_cast<std::size_t>(cfg.avg_symbols);
    const PdpEstimator estimator(cfg, cap.known_sequence, cap.sample_rate_hz);

    std::vector<PdpFrame> frames(n_frames);
    std::exception_ptr failure;
    const auto n_frames_ll = static_cast<long long>(n_frames);
#pragma omp parallel for schedule(static)
    for (long long b = 0; b < n_frames_ll; ++b) {
        try {
            const std::size_t first = static_cast<std::size_t>(b) * block;
            frames[static_cast<std::size_t>(b)] =
                estimator.estimate(std::span(cap.samples).subspan(first, block),
                                   cap.start_time_s + static_cast<double>(first) / cap.sample_rate_hz);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return frames;
}

std::vector<PdpFrame> estimate_pdp_serial(const Capture& cap, const SounderConfig& cfg) {
    check_capture(cap, cfg);
    const auto n = static_cast<std::size_t>(cfg.n_points);
    const auto avg = static_cast<std::size_t>(cfg.avg_symbols);
    const std::size_t n_frames = cap.n_symbols() / avg;
    const double fs = cap.sample_rate_hz;
    const auto grid = cfg.cfo_grid();

    const detail::Fft fft(cfg.n_points);
    std::vector<cplx> known_spectrum(n);
    fft.forward(transmit_symbol(cap.known_sequence), known_spectrum);

    std::vector<PdpFrame> frames;
    std::vector<cplx> sym(n), spec(n), avg_response(n), imp(n);
    for (std::size_t b = 0; b < n_frames; ++b) {
        const std::size_t first = b * avg * n;
        PdpFrame best;
        best.t_s = cap.start_time_s + static_cast<double>(first) / fs;
        double best_peak = -1.0;
        for (const std::size_t h : search_order(grid)) {
            std::fill(avg_response.begin(), avg_response.end(), cplx{0.0, 0.0});
            for (std::size_t s = 0; s < avg; ++s) {
                for (std::size_t i = 0; i < n; ++i) {
                    const std::size_t local = s * n + i;
                    sym[i] = cap.samples[first + local] * unit_phasor(-grid[h] * static_cast<double>(local) / fs);
                }
                fft.forward(sym, spec);
                for (std::size_t k = 0; k < n; ++k) avg_response[k] += spec[k] / known_spectrum[k];
            }
            for (auto& v : avg_response) v /= static_cast<double>(avg);
            fft.backward(avg_response, imp);
            std::vector<double> bins(n);
            for (std::size_t d = 0; d < n; ++d) bins[d] = std::norm(imp[d] / static_cast<double>(n));
            const double peak = max_of(bins);
            if (peak > best_peak) {
                best_peak = peak;
                best.bins = std::move(bins);
                best.chosen_cfo_hz = grid[h];
            }
        }
        frames.push_back(std::move(best));
    }
    return frames;
}

std::vector<double> peak_powers(std::span<const PdpFrame> frames) {
    std::vector<double> peaks;
    peaks.reserve(frames.size());
    for (const auto& f : frames) peaks.push_back(max_of(f.bins));
    return peaks;
}

blockage::BlockageTrace blockage_from_peaks(std::span<const double> peaks, double frame_period_s, int decimation) {
    if (decimation < 1) throw ConfigError("decimation must be >= 1");
    if (!(frame_period_s > 0.0)) throw ConfigError("frame period must be > 0");
    std::vector<double> kept;
    for (std::size_t i = 0; i < peaks.size(); i += static_cast<std::size_t>(decimation)) kept.push_back(peaks[i]);
    if (kept.size() < 2) throw ConfigError("too few PDP frames for a blockage trace after decimation");

    std::vector<double> sorted = kept;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t mid = sorted.size() / 2;
    const double median = sorted.size() % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
    if (!(median > 0.0)) throw NumericError("PDP peak median is zero; cannot normalize blockage trace");
    for (auto& v : kept) v /= median;
    return blockage::BlockageTrace(std::move(kept), frame_period_s * decimation, "sounder");
}

blockage::BlockageTrace extract_blockage(std::span<const PdpFrame> frames, const SounderConfig& cfg) {
    if (frames.empty()) throw ConfigError("extract_blockage needs at least one PDP frame");
    const double period = frames.size() >= 2 ? frames[1].t_s - frames[0].t_s : cfg.frame_period_s;
    return blockage_from_peaks(peak_powers(frames), period, cfg.decimation);
}

}  // namespace mmw::sounder
