// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mmwsnr Authors

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>

#include "mmwsnr/error.hpp"
#include "mmwsnr/sounder.hpp"
#include "mmwsnr/units.hpp"

using namespace mmw;
using namespace mmw::sounder;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<cplx> dft(const std::vector<cplx>& x, int sign) {
    const std::size_t n = x.size();
    std::vector<cplx> y(n);
    for (std::size_t k = 0; k < n; ++k) {
        cplx acc{0, 0};
        for (std::size_t i = 0; i < n; ++i)
            acc += x[i] * std::polar(1.0, sign * 2.0 * kPi * static_cast<double>((k * i) % n) / static_cast<double>(n));
        y[k] = acc;
    }
    return y;
}

// Literal pipeline for one window and one CFO hypothesis: derotate each
// symbol, DFT it, divide by the known spectrum, average, back to delay.
std::vector<double> pdp_oracle(const Capture& cap, std::size_t first_symbol, int avg, double cfo) {
    const std::size_t n = cap.n_points();
    std::vector<cplx> x(cap.known_sequence);
    auto tx = dft(x, +1);
    for (auto& v : tx) v /= std::sqrt(static_cast<double>(n));
    const auto tx_spec = dft(tx, -1);
    std::vector<cplx> h_avg(n, {0, 0});
    for (int s = 0; s < avg; ++s) {
        std::vector<cplx> sym(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t idx = (first_symbol + static_cast<std::size_t>(s)) * n + i;
            const double t = static_cast<double>(idx) / cap.sample_rate_hz;
            sym[i] = cap.samples[idx] * std::polar(1.0, -2.0 * kPi * cfo * t);
        }
        const auto spec = dft(sym, -1);
        for (std::size_t k = 0; k < n; ++k) h_avg[k] += spec[k] / tx_spec[k] / static_cast<double>(avg);
    }
    const auto imp = dft(h_avg, +1);
    std::vector<double> bins(n);
    for (std::size_t d = 0; d < n; ++d) bins[d] = std::norm(imp[d] / static_cast<double>(n));
    return bins;
}

std::size_t argmax(const std::vector<double>& v) {
    return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

std::filesystem::path tmp(const std::string& name) {
    const auto dir = std::filesystem::path(MMWSNR_TEST_TMP) / "sounder";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("configuration and hypothesis grid") {
    const SounderConfig cfg;
    const auto grid = cfg.cfo_grid();
    REQUIRE(grid.size() == 9);
    for (std::size_t i = 0; i < 9; ++i) CHECK(grid[i] == doctest::Approx(-50e3 + 12.5e3 * static_cast<double>(i)));
    CHECK(cfg.symbol_period_s() == doctest::Approx(128 / 130e6));
    SounderConfig bad;
    bad.n_points = 100;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = SounderConfig{};
    bad.cfo_hypotheses = 8;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("known sequence and transmit symbol") {
    const auto q = qpsk_sequence(128);
    REQUIRE(q.size() == 128);
    for (const auto v : q) CHECK(std::abs(v) == doctest::Approx(1.0));
    const auto tx = transmit_symbol(q);
    auto oracle = dft(q, +1);
    double power = 0.0;
    for (std::size_t i = 0; i < tx.size(); ++i) {
        CHECK(std::abs(tx[i] - oracle[i] / std::sqrt(128.0)) < 1e-12);
        power += std::norm(tx[i]);
    }
    CHECK(power / 128.0 == doctest::Approx(1.0));
}

TEST_CASE("make_capture examples") {
    const SounderConfig cfg;
    const auto cap = make_capture({{0, {1.0, 0.0}}}, 0.0, kInf, 3, cfg, 1);
    const auto tx = transmit_symbol(cap.known_sequence);
    REQUIRE(cap.samples.size() == 3 * 128);
    CHECK(cap.n_symbols() == 3);
    for (std::size_t i = 0; i < cap.samples.size(); ++i) CHECK(std::abs(cap.samples[i] - tx[i % 128]) < 1e-12);

    const auto a = make_capture({{3, {0.5, 0.2}}}, 0.0, 10.0, 4, cfg, 9);
    const auto b = make_capture({{3, {0.5, 0.2}}}, 0.0, 10.0, 4, cfg, 9);
    CHECK(a.samples == b.samples);

    const cplx g{0.6, -1.3};
    const auto base = make_capture({{5, {1.0, 0.0}}, {9, {0.2, 0.1}}}, 20e3, kInf, 2, cfg, 1);
    const auto scaled = make_capture({{5, g}, {9, cplx{0.2, 0.1} * g}}, 20e3, kInf, 2, cfg, 1);
    double p0 = 0.0, p1 = 0.0;
    for (std::size_t i = 0; i < base.samples.size(); ++i) {
        p0 += std::norm(base.samples[i]);
        p1 += std::norm(scaled.samples[i]);
    }
    CHECK(p1 == doctest::Approx(std::norm(g) * p0).epsilon(1e-12));

    CHECK_THROWS_AS(make_capture({{128, {1.0, 0.0}}}, 0.0, kInf, 1, cfg, 1), ConfigError);
    CHECK_THROWS_AS(make_capture({{-1, {1.0, 0.0}}}, 0.0, kInf, 1, cfg, 1), ConfigError);
}

TEST_CASE("capture CFO rotates the received symbol") {
    const SounderConfig cfg;
    const double cfo = 37e3;
    const auto still = make_capture({{2, {1.0, 0.0}}}, 0.0, kInf, 2, cfg, 1);
    const auto moving = make_capture({{2, {1.0, 0.0}}}, cfo, kInf, 2, cfg, 1);
    for (std::size_t i = 0; i < still.samples.size(); ++i) {
        const double t = static_cast<double>(i) / cfg.sample_rate_hz;
        CHECK(std::abs(moving.samples[i] - still.samples[i] * std::polar(1.0, 2 * kPi * cfo * t)) < 1e-9);
    }
}

TEST_CASE("estimate_pdp on a delta channel") {
    const SounderConfig cfg;
    for (int d : {0, 1, 17, 127}) {
        const auto cap = make_capture({{d, {0.8, 0.3}}}, 0.0, kInf, cfg.avg_symbols, cfg, 1);
        const auto frames = estimate_pdp(cap, cfg);
        REQUIRE(frames.size() == 1);
        const auto& bins = frames[0].bins;
        REQUIRE(bins.size() == 128);
        CHECK(argmax(bins) == static_cast<std::size_t>(d));
        CHECK(bins[static_cast<std::size_t>(d)] == doctest::Approx(0.73).epsilon(1e-9));
        for (std::size_t k = 0; k < bins.size(); ++k)
            if (k != static_cast<std::size_t>(d)) CHECK(bins[k] <= 1e-10 * bins[static_cast<std::size_t>(d)]);
        CHECK(frames[0].chosen_cfo_hz == 0.0);
    }
    CHECK_THROWS_AS(estimate_pdp(make_capture({{0, {1, 0}}}, 0.0, kInf, 31, cfg, 1), cfg), ConfigError);
}

TEST_CASE("CFO search picks the nearest hypothesis") {
    const SounderConfig cfg;
    int hits = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const auto cap = make_capture({{4, {1.0, 0.0}}, {11, {0.3, 0.2}}}, 30e3, 20.0, cfg.avg_symbols, cfg, seed);
        if (estimate_pdp(cap, cfg)[0].chosen_cfo_hz == 25e3) ++hits;
    }
    CHECK(hits == 100);
}

TEST_CASE("fast estimator matches the naive DFT oracle") {
    SounderConfig cfg;
    cfg.avg_symbols = 4;
    const auto cap = make_capture({{3, {1.0, 0.0}}, {20, {0.4, -0.3}}, {50, {0.1, 0.1}}}, -18e3, 25.0, 8, cfg, 4);
    const auto frames = estimate_pdp(cap, cfg);
    REQUIRE(frames.size() == 2);
    for (std::size_t b = 0; b < 2; ++b) {
        const auto oracle = pdp_oracle(cap, b * 4, 4, frames[b].chosen_cfo_hz);
        for (std::size_t d = 0; d < 128; ++d) CHECK(frames[b].bins[d] == doctest::Approx(oracle[d]).epsilon(1e-9).scale(1e-6));
        // The chosen hypothesis has the largest oracle peak.
        const double chosen_peak = *std::max_element(oracle.begin(), oracle.end());
        for (const double f : cfg.cfo_grid()) {
            const auto other = pdp_oracle(cap, b * 4, 4, f);
            CHECK(*std::max_element(other.begin(), other.end()) <= chosen_peak * (1 + 1e-9));
        }
    }
}

TEST_CASE("two-tap power ratio") {
    const SounderConfig cfg;
    const double p1 = 1.0, p2 = 0.25;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto cap = make_capture({{6, {std::sqrt(p1), 0.0}}, {40, std::polar(std::sqrt(p2), 1.0)}}, 8e3, 30.0,
                                      cfg.avg_symbols, cfg, seed);
        const auto bins = estimate_pdp(cap, cfg)[0].bins;
        std::vector<double> sorted = bins;
        std::sort(sorted.rbegin(), sorted.rend());
        CHECK(sorted[0] == bins[6]);
        CHECK(sorted[1] == bins[40]);
        CHECK(std::abs(linear_to_db(bins[6] / bins[40]) - linear_to_db(p1 / p2)) < 0.5);
    }
}

TEST_CASE("serial and parallel estimators agree") {
    const SounderConfig cfg;
    const auto cap = make_capture({{0, {1.0, 0.0}}, {9, {0.4, 0.2}}}, -21e3, 15.0, 5 * cfg.avg_symbols, cfg, 2);
    const auto fast = estimate_pdp(cap, cfg);
    const auto slow = estimate_pdp_serial(cap, cfg);
    REQUIRE(fast.size() == 5);
    REQUIRE(slow.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(fast[i].chosen_cfo_hz == slow[i].chosen_cfo_hz);
        CHECK(fast[i].t_s == doctest::Approx(slow[i].t_s));
        for (std::size_t d = 0; d < 128; ++d) CHECK(fast[i].bins[d] == doctest::Approx(slow[i].bins[d]).epsilon(1e-9).scale(1e-6));
    }
}

TEST_CASE("averaging lowers the noise floor variance") {
    SounderConfig one;
    one.avg_symbols = 1;
    const SounderConfig many;
    std::vector<double> floor_one, floor_many;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto cap = make_capture({{10, {1.0, 0.0}}}, 0.0, 10.0, 64, many, seed);
        for (const auto& f : estimate_pdp(cap, one))
            for (std::size_t d = 30; d < 128; ++d) floor_one.push_back(f.bins[d]);
        for (const auto& f : estimate_pdp(cap, many))
            for (std::size_t d = 30; d < 128; ++d) floor_many.push_back(f.bins[d]);
    }
    auto variance = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double x : v) m += x;
        m /= static_cast<double>(v.size());
        double s = 0.0;
        for (double x : v) s += (x - m) * (x - m);
        return s / static_cast<double>(v.size() - 1);
    };
    CHECK(variance(floor_one) >= 16.0 * variance(floor_many));
}

TEST_CASE("blockage extraction") {
    const SounderConfig cfg;
    std::vector<double> constant(400, 0.3);
    const auto flat = blockage_from_peaks(constant, 32e-6, 4);
    CHECK(flat.size() == 100);
    CHECK(flat.sample_period_s() == doctest::Approx(128e-6));
    for (double v : flat.samples()) CHECK(v == doctest::Approx(1.0));

    CHECK(blockage_from_peaks(std::vector<double>(312500, 1.0), 32e-6, 4).size() == 78125);

    std::vector<double> fade(400, 2.0);
    for (std::size_t i = 100; i < 140; ++i) fade[i] = 0.02;
    const auto dip = blockage_from_peaks(fade, 32e-6, 4);
    CHECK(*std::min_element(dip.samples().begin(), dip.samples().end()) == doctest::Approx(0.01));

    // A global complex rotation of the capture leaves the trace unchanged.
    auto cap = make_capture({{3, {1.0, 0.0}}, {12, {0.3, 0.3}}}, 10e3, 20.0, 8 * cfg.avg_symbols, cfg, 3);
    const auto base = extract_blockage(estimate_pdp(cap, cfg), cfg);
    const cplx rot = std::polar(1.0, 2.1);
    for (auto& s : cap.samples) s *= rot;
    const auto turned = extract_blockage(estimate_pdp(cap, cfg), cfg);
    REQUIRE(base.size() == turned.size());
    for (std::size_t i = 0; i < base.size(); ++i) CHECK(turned.samples()[i] == doctest::Approx(base.samples()[i]).epsilon(1e-9));
}

TEST_CASE("capture files round trip") {
    const SounderConfig cfg;
    const auto cap = make_capture({{3, {1.0, 0.0}}}, 5e3, 20.0, 4, cfg, 2);
    const auto p = tmp("cap.bin");
    write_capture(p, cap);
    const auto back = read_capture(p);
    CHECK(back.sample_rate_hz == cap.sample_rate_hz);
    REQUIRE(back.samples.size() == cap.samples.size());
    REQUIRE(back.known_sequence.size() == 128);
    for (std::size_t i = 0; i < cap.samples.size(); ++i) CHECK(std::abs(back.samples[i] - cap.samples[i]) < 1e-6);
    for (std::size_t i = 0; i < 128; ++i) CHECK(std::abs(back.known_sequence[i] - cap.known_sequence[i]) < 1e-6);

    const auto junk = tmp("junk.bin");
    {
        std::ofstream out(junk, std::ios::binary);
        out << "NOTACAPTUREFILE";
    }
    CHECK_THROWS_AS(read_capture(junk), ParseError);
}
