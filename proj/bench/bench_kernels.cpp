// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mmwsnr Authors

// OpenMP kernels against their serial references.

#include <benchmark/benchmark.h>

#include <vector>

#include "mmwsnr/blockage_calibration.hpp"
#include "mmwsnr/eval.hpp"
#include "mmwsnr/scenario.hpp"
#include "mmwsnr/sounder.hpp"

namespace {

using namespace mmw;

struct WidebandFixture {
    Scenario sc;
    Realization r = realize(sc, 1);
    BeamformedChannel ch{r.state, r.w_tx, r.codebook.beams[static_cast<std::size_t>(r.direction)]};
};

const WidebandFixture& wideband() {
    static const WidebandFixture f;
    return f;
}

void BM_MeanWidebandSnr(benchmark::State& state) {
    const auto& f = wideband();
    for (auto _ : state)
        benchmark::DoNotOptimize(blockage::mean_wideband_snr(f.ch, f.sc.link, f.r.times, f.sc.integration));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(f.r.times.size()));
}

void BM_MeanWidebandSnrSerial(benchmark::State& state) {
    const auto& f = wideband();
    for (auto _ : state)
        benchmark::DoNotOptimize(blockage::mean_wideband_snr_serial(f.ch, f.sc.link, f.r.times, f.sc.integration));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(f.r.times.size()));
}

const sounder::Capture& capture() {
    static const sounder::SounderConfig cfg;
    static const auto cap =
        sounder::make_capture({{0, {1.0, 0.0}}, {7, {0.3, 0.1}}, {19, {0.1, -0.1}}}, 30e3, 20.0, 64 * cfg.avg_symbols, cfg, 1);
    return cap;
}

void BM_EstimatePdp(benchmark::State& state) {
    const sounder::SounderConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(sounder::estimate_pdp(capture(), cfg));
    state.SetItemsProcessed(state.iterations() * 64);
}

void BM_EstimatePdpSerial(benchmark::State& state) {
    const sounder::SounderConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(sounder::estimate_pdp_serial(capture(), cfg));
    state.SetItemsProcessed(state.iterations() * 64);
}

struct SweepFixture {
    Scenario sc;
    std::vector<FilterSpec> filters{FilterSpec::none(), FilterSpec::first_order(0.3), FilterSpec::moving_average(4)};
    std::vector<double> targets{-20.0, 0.0, 20.0};
    std::vector<std::uint64_t> seeds{1, 2, 3, 4};
};

void BM_Sweep(benchmark::State& state) {
    const SweepFixture f;
    for (auto _ : state) benchmark::DoNotOptimize(eval::sweep_target_snr(f.sc, f.filters, f.targets, f.seeds));
}

void BM_SweepSerial(benchmark::State& state) {
    const SweepFixture f;
    for (auto _ : state) benchmark::DoNotOptimize(eval::sweep_target_snr_serial(f.sc, f.filters, f.targets, f.seeds));
}

}  // namespace

BENCHMARK(BM_MeanWidebandSnr)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_MeanWidebandSnrSerial)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_EstimatePdp)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EstimatePdpSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sweep)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
