// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mmwsnr Authors

#include "mmwsnr/arrays.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mmwsnr/error.hpp"
#include "mmwsnr/units.hpp"

namespace mmw {

void ArrayGeometry::validate() const {
    if (rows < 1 || cols < 1)
        throw ConfigError("array geometry needs rows >= 1 and cols >= 1, got " + std::to_string(rows) +
                          "x" + std::to_string(cols));
    if (!(element_spacing > 0.0) || !std::isfinite(element_spacing))
        throw ConfigError("array element_spacing must be positive");
}

SteeringVector::SteeringVector(CVec weights) : weights_(std::move(weights)) {
    double norm2 = 0.0;
    for (const auto& w : weights_) norm2 += std::norm(w);
    if (weights_.empty() || !(norm2 > 0.0) || !std::isfinite(norm2))
        throw NumericError("steering vector must be nonzero and finite");
    const double scale = 1.0 / std::sqrt(norm2);
    for (auto& w : weights_) w *= scale;
}

SteeringVector SteeringVector::single_element(int size, int element) {
    if (size < 1 || element < 0 || element >= size)
        throw ConfigError("single_element: element index out of range");
    CVec w(static_cast<std::size_t>(size), cplx{0.0, 0.0});
    w[static_cast<std::size_t>(element)] = 1.0;
    return SteeringVector(std::move(w));
}

SteeringVector steering_vector(const ArrayGeometry& geom, double azimuth, double elevation) {
    geom.validate();
    if (!std::isfinite(azimuth) || !std::isfinite(elevation))
        throw NumericError("steering_vector: angles must be finite");

    // Projection of the unit direction k(az, el) onto the array axes.
    const double ky = std::cos(elevation) * std::sin(azimuth);
    const double kz = std::sin(elevation);

    CVec w;
    w.reserve(static_cast<std::size_t>(geom.size()));
    for (int r = 0; r < geom.rows; ++r) {
        for (int c = 0; c < geom.cols; ++c) {
            const double phase = kTwoPi * geom.element_spacing * (c * ky + r * kz);
            w.emplace_back(std::cos(phase), std::sin(phase));
        }
    }
    return SteeringVector(std::move(w));
}

BeamCodebook uniform_codebook(const ArrayGeometry& geom, int n_dir) {
    if (n_dir < 1) throw ConfigError("uniform_codebook: n_dir must be >= 1");
    BeamCodebook book;
    book.beams.reserve(static_cast<std::size_t>(n_dir));
    book.azimuths.reserve(static_cast<std::size_t>(n_dir));
    for (int i = 0; i < n_dir; ++i) {
        const double az = -std::numbers::pi + kTwoPi * i / n_dir;
        book.azimuths.push_back(az);
        book.beams.push_back(steering_vector(geom, az, 0.0));
    }
    return book;
}

cplx inner(const SteeringVector& a, const SteeringVector& b) {
    if (a.size() != b.size())
        throw DimensionError("incompatible array configuration: vector lengths " +
                             std::to_string(a.size()) + " and " + std::to_string(b.size()));
    cplx acc{0.0, 0.0};
    for (std::size_t m = 0; m < a.size(); ++m) acc += std::conj(a[m]) * b[m];
    return acc;
}

double beamforming_gain(const SteeringVector& w_rx, const SteeringVector& u_rx,
                        const SteeringVector& w_tx, const SteeringVector& u_tx) {
    return std::norm(inner(w_rx, u_rx)) * std::norm(inner(u_tx, w_tx));
}

}  // namespace mmw
