// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mmwsnr Authors

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mmwsnr/arrays.hpp"
#include "mmwsnr/error.hpp"

using namespace mmw;

namespace {

constexpr double kPi = std::numbers::pi;

double norm2(const SteeringVector& v) {
    double s = 0.0;
    for (const auto w : v.weights()) s += std::norm(w);
    return std::sqrt(s);
}

// Plane-wave phase at element (r, c): 2 pi d (c cos(el) sin(az) + r sin(el)).
CVec planar_oracle(int rows, int cols, double d, double az, double el) {
    CVec w;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            const double phase = 2.0 * kPi * d * (c * std::cos(el) * std::sin(az) + r * std::sin(el));
            w.push_back(std::polar(1.0 / std::sqrt(rows * cols), phase));
        }
    return w;
}

SteeringVector random_unit(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> g;
    CVec w(static_cast<std::size_t>(n));
    for (auto& x : w) x = {g(rng), g(rng)};
    return SteeringVector(w);
}

}  // namespace

TEST_CASE("steering vector examples") {
    const double r = 1.0 / std::sqrt(2.0);
    auto broadside = steering_vector({1, 2, 0.5}, 0.0, 0.0);
    CHECK(std::abs(broadside[0] - cplx(r, 0)) < 1e-15);
    CHECK(std::abs(broadside[1] - cplx(r, 0)) < 1e-15);

    auto single = steering_vector({1, 1, 0.5}, 1.234, -0.4);
    CHECK(single.size() == 1);
    CHECK(std::abs(single[0] - cplx(1, 0)) < 1e-15);

    // 2 pi * 0.5 * sin(90 deg) = pi between neighbours.
    auto endfire = steering_vector({1, 2, 0.5}, kPi / 2, 0.0);
    CHECK(std::abs(endfire[0] - cplx(r, 0)) < 1e-15);
    CHECK(std::abs(endfire[1] - cplx(-r, 0)) < 1e-12);
}

TEST_CASE("steering vector matches plane-wave oracle and has unit norm") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    std::uniform_int_distribution<int> dim(1, 8);
    for (int trial = 0; trial < 200; ++trial) {
        const int rows = dim(rng), cols = dim(rng);
        const double az = ang(rng), el = 0.5 * ang(rng);
        const double d = 0.25 + 0.5 * std::abs(ang(rng)) / kPi;
        const auto v = steering_vector({rows, cols, d}, az, el);
        const auto oracle = planar_oracle(rows, cols, d, az, el);
        REQUIRE(v.size() == oracle.size());
        for (std::size_t i = 0; i < oracle.size(); ++i) CHECK(std::abs(v[i] - oracle[i]) < 1e-12);
        CHECK(std::abs(norm2(v) - 1.0) < 1e-12);
    }
}

TEST_CASE("steering vector rejects zero weights and bad geometry") {
    CHECK_THROWS_AS(SteeringVector(CVec{0.0, 0.0}), Error);
    CHECK_THROWS_AS((ArrayGeometry{0, 2, 0.5}.validate()), ConfigError);
    CHECK_THROWS_AS((ArrayGeometry{2, 2, 0.0}.validate()), ConfigError);
}

TEST_CASE("uniform codebook examples") {
    const auto one = uniform_codebook({2, 2, 0.5}, 1);
    REQUIRE(one.size() == 1);
    CHECK(one.azimuths[0] == doctest::Approx(-kPi));

    const auto sixteen = uniform_codebook({4, 4, 0.5}, 16);
    REQUIRE(sixteen.size() == 16);
    for (std::size_t i = 1; i < 16; ++i) CHECK(sixteen.azimuths[i] - sixteen.azimuths[i - 1] == doctest::Approx(2 * kPi / 16));
    CHECK(sixteen.azimuths.back() < kPi);
    for (std::size_t i = 0; i < 16; ++i) {
        const auto expect = steering_vector({4, 4, 0.5}, sixteen.azimuths[i]);
        for (std::size_t e = 0; e < expect.size(); ++e) CHECK(sixteen.beams[i][e] == expect[e]);
    }

    const auto iso = uniform_codebook({1, 1, 0.5}, 4);
    for (const auto& b : iso.beams) CHECK(std::abs(b[0] - cplx(1, 0)) < 1e-15);
}

TEST_CASE("beamforming gain examples") {
    std::mt19937_64 rng(5);
    const auto u_rx = random_unit(rng, 16), u_tx = random_unit(rng, 64);
    CHECK(beamforming_gain(u_rx, u_rx, u_tx, u_tx) == doctest::Approx(1.0).epsilon(1e-12));

    const SteeringVector e0 = SteeringVector::single_element(4, 0), e1 = SteeringVector::single_element(4, 1);
    CHECK(beamforming_gain(e0, e1, e0, e0) == 0.0);

    const double r = 1.0 / std::sqrt(2.0);
    const SteeringVector broadside(CVec{r, r}), flipped(CVec{r, -r});
    const SteeringVector one(CVec{1.0});
    CHECK(beamforming_gain(broadside, flipped, one, one) < 1e-30);

    CHECK_THROWS_AS(beamforming_gain(e0, broadside, one, one), DimensionError);
    CHECK_THROWS_AS(inner(e0, broadside), DimensionError);
}

TEST_CASE("beamforming gain properties on random inputs") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ph(-kPi, kPi);
    for (int trial = 0; trial < 500; ++trial) {
        const auto a = random_unit(rng, 8), b = random_unit(rng, 8), c = random_unit(rng, 4), d = random_unit(rng, 4);
        const double g = beamforming_gain(a, b, c, d);
        CHECK(g >= 0.0);
        CHECK(g <= 1.0 + 1e-12);
        // Oracle: |a^H b|^2 |d^H c|^2 evaluated by hand.
        cplx ab{0, 0}, dc{0, 0};
        for (std::size_t i = 0; i < 8; ++i) ab += std::conj(a[i]) * b[i];
        for (std::size_t i = 0; i < 4; ++i) dc += std::conj(d[i]) * c[i];
        CHECK(g == doctest::Approx(std::norm(ab) * std::norm(dc)).epsilon(1e-12));

        CVec rotated(a.weights().begin(), a.weights().end());
        const cplx rot = std::polar(1.0, ph(rng));
        for (auto& w : rotated) w *= rot;
        CHECK(beamforming_gain(SteeringVector(rotated), b, c, d) == doctest::Approx(g).epsilon(1e-12));
    }
}
