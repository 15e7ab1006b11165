// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mmwsnr Authors

#pragma once

#include <complex>
#include <memory>
#include <span>

namespace mmw::detail {

// Fixed-size complex DFT backed by FFTW. Plans are created once under a
// global lock; execution is reentrant, so one instance can be shared by
// OpenMP threads that each pass their own buffers.
class Fft {
public:
    // Plans are created once per size and shared; executing them on new
    // arrays is safe from any thread.
    explicit Fft(int n);

    int size() const { return n_; }

    // X[k] = sum_n x[n] exp(-2 pi j k n / N)
    void forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;
    // x[n] = sum_k X[k] exp(+2 pi j k n / N), unnormalized
    void backward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;

private:
    struct Plans;
    int n_;
    std::shared_ptr<const Plans> plans_;
};

}  // namespace mmw::detail
