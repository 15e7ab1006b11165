// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mmwsnr Authors

#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <vector>

#include "mmwsnr/error.hpp"

namespace mmw::detail {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }
fftw_complex* as_fftw(const std::complex<double>* p) {
    // FFTW takes non-const input pointers but does not write to them for
    // out-of-place transforms.
    return reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(p));
}

}  // namespace

struct Fft::Plans {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;

    ~Plans() {
        if (forward) fftw_destroy_plan(forward);
        if (backward) fftw_destroy_plan(backward);
    }
};

Fft::Fft(int n) : n_(n) {
    if (n < 1) throw ConfigError("FFT size must be >= 1");
    static std::map<int, std::shared_ptr<const Plans>> cache;
    std::lock_guard lock(planner_mutex());
    if (const auto it = cache.find(n); it != cache.end()) {
        plans_ = it->second;
        return;
    }
    std::vector<std::complex<double>> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    auto plans = std::make_shared<Plans>();
    plans->forward = fftw_plan_dft_1d(n, as_fftw(a.data()), as_fftw(b.data()), FFTW_FORWARD, flags);
    plans->backward = fftw_plan_dft_1d(n, as_fftw(a.data()), as_fftw(b.data()), FFTW_BACKWARD, flags);
    if (!plans->forward || !plans->backward) throw NumericError("FFTW planning failed");
    plans_ = plans;
    cache.emplace(n, plans_);
}

void Fft::forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const {
    fftw_execute_dft(plans_->forward, as_fftw(in.data()), as_fftw(out.data()));
}

void Fft::backward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const {
    fftw_execute_dft(plans_->backward, as_fftw(in.data()), as_fftw(out.data()));
}

}  // namespace mmw::detail
