// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mmwsnr Authors

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <memory>
#include <numbers>
#include <random>

#include "mmwsnr/channel.hpp"
#include "mmwsnr/error.hpp"
#include "mmwsnr/units.hpp"

using namespace mmw;

namespace {

constexpr double kPi = std::numbers::pi;

std::shared_ptr<const blockage::BlockageTrace> flat_trace(double level = 1.0, std::size_t n = 2, double period = 10.0) {
    return std::make_shared<const blockage::BlockageTrace>(std::vector<double>(n, level), period);
}

Path omni_path(double power, double delay, double doppler = 0.0) {
    const SteeringVector one(CVec{1.0});
    return Path{power, delay, doppler, 0.0, 0.0, one, one};
}

const SteeringVector kOne(CVec{1.0});

// |H(t,f)|^2 written straight from the multipath sum with single-element arrays.
double response_power_oracle(const std::vector<Path>& paths, double scale, double t, double f) {
    std::complex<double> acc{0.0, 0.0};
    for (const auto& p : paths) {
        const double phase = 2.0 * kPi * (p.doppler_hz * t - p.delay_s * f);
        acc += std::sqrt(scale * p.power) * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return std::norm(acc) / static_cast<double>(paths.size());
}

double riemann_band_gain(const std::vector<Path>& paths, const Band& band, double t, long n) {
    double acc = 0.0;
    const double step = band.width_hz / static_cast<double>(n);
    for (long k = 0; k < n; ++k) acc += response_power_oracle(paths, 1.0, t, band.low_hz() + (k + 0.5) * step);
    return acc / static_cast<double>(n);
}

}  // namespace

TEST_CASE("generate_pathset contracts") {
    ScenarioConfig cfg;
    const ArrayGeometry bs{8, 8, 0.5}, ue{4, 4, 0.5};
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        cfg.seed = seed;
        const auto ps = generate_pathset(cfg, bs, ue);
        double total = 0.0;
        for (const auto& p : ps.paths()) {
            total += p.power;
            CHECK(p.delay_s >= 0.0);
            CHECK(p.sig_rx.size() == 16);
            CHECK(p.sig_tx.size() == 64);
            CHECK(p.aoa_azimuth >= -kPi);
            CHECK(p.aoa_azimuth < kPi);
        }
        CHECK(std::abs(total - 1.0) < 1e-12);
    }

    cfg.path_count_mean = 1e-9;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        cfg.seed = seed;
        CHECK(generate_pathset(cfg, bs, ue).size() == 1);
    }

    cfg = ScenarioConfig{};
    cfg.seed = 99;
    const auto a = generate_pathset(cfg, bs, ue), b = generate_pathset(cfg, bs, ue);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.paths()[i].power == b.paths()[i].power);
        CHECK(a.paths()[i].delay_s == b.paths()[i].delay_s);
        CHECK(a.paths()[i].aoa_azimuth == b.paths()[i].aoa_azimuth);
        CHECK(a.paths()[i].aod_azimuth == b.paths()[i].aod_azimuth);
    }
}

TEST_CASE("path powers decay with delay before normalization") {
    ScenarioConfig cfg;
    cfg.seed = 4;
    cfg.path_count_mean = 20;
    const auto ps = generate_pathset(cfg, {1, 1, 0.5}, {1, 1, 0.5});
    const auto& p = ps.paths();
    for (std::size_t i = 1; i < p.size(); ++i) {
        const double expected_db = -cfg.power_decay_db_per_ns * (p[i].delay_s - p[0].delay_s) * 1e9;
        CHECK(linear_to_db(p[i].power / p[0].power) == doctest::Approx(expected_db).epsilon(1e-9));
    }
}

TEST_CASE("assign_doppler examples") {
    ScenarioConfig cfg;
    cfg.seed = 3;
    auto ps = generate_pathset(cfg, {2, 2, 0.5}, {2, 2, 0.5});

    cfg.ue_speed_mps = 0.0;
    for (const auto& p : assign_doppler(ps, cfg).paths()) CHECK(p.doppler_hz == 0.0);

    cfg.ue_speed_mps = 1.0;
    cfg.carrier_hz = 60e9;
    std::vector<Path> one{omni_path(1.0, 0.0)};
    one[0].aoa_azimuth = kPi / 3;
    cfg.motion_azimuth = 0.0;
    const auto d60 = assign_doppler(PathSet(one), cfg).paths()[0].doppler_hz;
    CHECK(d60 == doctest::Approx(100.069).epsilon(1e-5));  // 60e9 / 299792458 * cos(60 deg)

    cfg.motion_azimuth = kPi / 3;
    CHECK(assign_doppler(PathSet(one), cfg).paths()[0].doppler_hz == doctest::Approx(60e9 / 299792458.0));

    cfg = ScenarioConfig{};
    cfg.seed = 8;
    auto all = assign_doppler(generate_pathset(cfg, {2, 2, 0.5}, {2, 2, 0.5}), cfg);
    for (const auto& p : all.paths()) CHECK(std::abs(p.doppler_hz) <= cfg.max_doppler_hz() * (1 + 1e-12));
}

TEST_CASE("channel_response examples") {
    const Band band{28e9, 500e6};
    const ChannelState single(PathSet({omni_path(1.0, 0.0)}), flat_trace(), 1.0, band);
    CHECK(std::abs(channel_response(single, 0.5, band.center_hz, kOne, kOne) - cplx(1, 0)) < 1e-12);

    const ChannelState blocked(PathSet({omni_path(1.0, 0.0)}), flat_trace(0.0), 1.0, band);
    CHECK(std::abs(channel_response(blocked, 0.5, band.center_hz, kOne, kOne)) == 0.0);

    // Second path delayed by half a carrier cycle at f: phases differ by pi.
    const double f = 28.1e9;
    const ChannelState cancel(PathSet({omni_path(0.5, 0.0), omni_path(0.5, 0.5 / f)}), flat_trace(), 1.0, band);
    CHECK(std::abs(channel_response(cancel, 1.0, f, kOne, kOne)) < 1e-9);

    CHECK_THROWS_AS(channel_response(single, 25.0, band.center_hz, kOne, kOne), RangeError);
    CHECK_THROWS_AS(channel_response(single, 1.0, band.high_hz() + 1e6, kOne, kOne), RangeError);
}

TEST_CASE("channel_response matches the multipath oracle") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Band band{28e9, 500e6};
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Path> paths;
        for (int l = 0; l < 5; ++l) paths.push_back(omni_path(u(rng), 300e-9 * u(rng), 200.0 * (u(rng) - 0.5)));
        const double beta = 0.1 + u(rng);
        const ChannelState st(PathSet(paths), flat_trace(0.7), beta, band);
        const double t = 9.0 * u(rng), f = band.low_hz() + band.width_hz * u(rng);
        const double got = std::norm(channel_response(st, t, f, kOne, kOne));
        CHECK(got == doctest::Approx(response_power_oracle(paths, beta * 0.7, t, f)).epsilon(1e-9));
    }
}

TEST_CASE("true wideband SNR on a flat channel") {
    const Band band{28e9, 500e6};
    const LinkBudget link{1.0, 4e-21};
    const double g = 0.37;
    const ChannelState st(PathSet({omni_path(1.0, 0.0)}), flat_trace(g), 1.0, band);
    const double expect = g * link.ptx_w / (link.n0_w_per_hz * band.width_hz);
    for (int n : {1, 7, 64}) CHECK(true_wideband_snr(st, 2.0, kOne, kOne, link, n) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(true_wideband_snr_exact(st, 2.0, kOne, kOne, link) == doctest::Approx(expect).epsilon(1e-12));

    const LinkBudget doubled{2.0, 4e-21};
    CHECK(true_wideband_snr_exact(st, 2.0, kOne, kOne, doubled) ==
          doctest::Approx(2 * true_wideband_snr_exact(st, 2.0, kOne, kOne, link)).epsilon(1e-12));
}

TEST_CASE("band integral against a brute-force Riemann sum") {
    const Band band{28e9, 500e6};
    const LinkBudget link;
    const double to_snr = link.ptx_w / (link.n0_w_per_hz * band.width_hz);

    SUBCASE("two-path channel, 64-point grid and closed form") {
        const std::vector<Path> paths{omni_path(0.7, 5e-9, 30.0), omni_path(0.3, 16e-9, -40.0)};
        const ChannelState st(PathSet(paths), flat_trace(), 1.0, band);
        const double brute = riemann_band_gain(paths, band, 0.3, 1000000) * to_snr;
        CHECK(std::abs(linear_to_db(true_wideband_snr(st, 0.3, kOne, kOne, link, 64)) - linear_to_db(brute)) < 0.01);
        CHECK(std::abs(linear_to_db(true_wideband_snr_exact(st, 0.3, kOne, kOne, link)) - linear_to_db(brute)) < 0.01);
    }

    SUBCASE("generated channels, closed form") {
        ScenarioConfig cfg;
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            cfg.seed = seed;
            const auto ps = assign_doppler(generate_pathset(cfg, {1, 1, 0.5}, {1, 1, 0.5}), cfg);
            const ChannelState st(ps, flat_trace(), 1.0, band);
            const double brute = riemann_band_gain(ps.paths(), band, 1.7, 1000000) * to_snr;
            CHECK(std::abs(linear_to_db(true_wideband_snr_exact(st, 1.7, kOne, kOne, link)) - linear_to_db(brute)) < 0.01);
        }
    }
}

TEST_CASE("channel invariants") {
    const Band band{28e9, 500e6};
    const LinkBudget link;
    std::vector<Path> paths{omni_path(0.5, 0.0), omni_path(0.3, 40e-9), omni_path(0.2, 90e-9)};

    // Zero Doppler: t enters only through h(t).
    auto ramp = std::make_shared<const blockage::BlockageTrace>(std::vector<double>{1.0, 0.25}, 1.0);
    const ChannelState st(PathSet(paths), ramp, 1.0, band);
    const double f = 28.05e9;
    const cplx h0 = channel_response(st, 0.0, f, kOne, kOne);
    const cplx h1 = channel_response(st, 1.0, f, kOne, kOne);
    CHECK(std::abs(h1 - 0.5 * h0) < 1e-12);

    // h -> c h with beta -> beta / c leaves gamma unchanged.
    const ChannelState a(PathSet(paths), flat_trace(0.2), 3.0, band);
    const ChannelState b(PathSet(paths), flat_trace(0.6), 1.0, band);
    CHECK(true_wideband_snr_exact(a, 1.0, kOne, kOne, link) ==
          doctest::Approx(true_wideband_snr_exact(b, 1.0, kOne, kOne, link)).epsilon(1e-12));

    // One path at zero delay is flat across the band.
    const ChannelState one(PathSet({omni_path(1.0, 0.0, 50.0)}), flat_trace(), 1.0, band);
    const double m0 = std::abs(channel_response(one, 0.3, band.low_hz(), kOne, kOne));
    for (double ff : {27.8e9, 28e9, 28.2e9}) CHECK(std::abs(channel_response(one, 0.3, ff, kOne, kOne)) == doctest::Approx(m0));
}

TEST_CASE("path set CSV export") {
    ScenarioConfig cfg;
    cfg.seed = 2;
    const auto ps = generate_pathset(cfg, {1, 1, 0.5}, {1, 1, 0.5});
    const auto path = std::filesystem::temp_directory_path() / "mmwsnr_pathset.csv";
    write_pathset_csv(path, ps);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "power,delay_ns,doppler_hz,aoa_deg,aod_deg");
    std::size_t rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    CHECK(rows == ps.size());
}
