// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mmwsnr Authors

#pragma once

#include <complex>
#include <span>
#include <vector>

namespace mmw {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

// Uniform planar array. Element (r, c) sits at (0, c, r) * element_spacing
// in carrier wavelengths, i.e. columns span the horizontal (azimuth) axis.
struct ArrayGeometry {
    int rows = 1;
    int cols = 1;
    double element_spacing = 0.5;

    int size() const { return rows * cols; }
    void validate() const;
};

// Unit-norm complex weight vector. Used both as a beamforming weight w and as
// a spatial signature u; the constructor normalizes its input.
class SteeringVector {
public:
    explicit SteeringVector(CVec weights);

    // Single active element, the BS "omni" synchronization pattern.
    static SteeringVector single_element(int size, int element = 0);

    std::span<const cplx> weights() const { return weights_; }
    std::size_t size() const { return weights_.size(); }
    cplx operator[](std::size_t i) const { return weights_[i]; }

private:
    CVec weights_;
};

struct BeamCodebook {
    std::vector<SteeringVector> beams;
    std::vector<double> azimuths;  // radians, strictly increasing in [-pi, pi)

    std::size_t size() const { return beams.size(); }
};

SteeringVector steering_vector(const ArrayGeometry& geom, double azimuth, double elevation = 0.0);

// n_dir beams at azimuths -pi + 2*pi*i/n_dir, zero elevation.
BeamCodebook uniform_codebook(const ArrayGeometry& geom, int n_dir);

// <a, b> = sum conj(a_m) b_m. Throws DimensionError on length mismatch.
cplx inner(const SteeringVector& a, const SteeringVector& b);

// |w_rx^H u_rx|^2 |u_tx^H w_tx|^2
double beamforming_gain(const SteeringVector& w_rx, const SteeringVector& u_rx,
                        const SteeringVector& w_tx, const SteeringVector& u_tx);

}  // namespace mmw
