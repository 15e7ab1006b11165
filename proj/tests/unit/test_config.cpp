// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mmwsnr Authors

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>

#include "mmwsnr/config.hpp"
#include "mmwsnr/error.hpp"
#include "mmwsnr/units.hpp"

using namespace mmw;
namespace fs = std::filesystem;

namespace {

std::string config_error(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("empty config yields defaults") {
    const auto cfg = parse_config("");
    CHECK(cfg.scenario.channel.carrier_hz == 28e9);
    CHECK(cfg.scenario.channel.bandwidth_hz == 500e6);
    CHECK(cfg.scenario.sync.n_dir == 16);
    CHECK(cfg.scenario.sync.n_sig == 4);
    CHECK(cfg.scenario.bs.size() == 64);
    CHECK(cfg.scenario.ue.size() == 16);
    CHECK(cfg.scenario.horizon_s == 10.0);
    CHECK(cfg.seeds == std::vector<std::uint64_t>{1});
    CHECK(cfg.percentiles == std::vector<calib::Percentile>{calib::Percentile::p5});
    REQUIRE(cfg.filters.size() == 3);
    CHECK(cfg.filters[1].id() == "fo_a0.3");
    CHECK(cfg.filters[2].id() == "ma_m4");
    CHECK(cfg.sweep.values().size() == 12);
    CHECK(cfg.sweep.values().front() == -30.0);
    CHECK(cfg.sweep.values().back() == 25.0);
    CHECK(cfg.sounder.sounder.n_points == 128);
    CHECK(cfg.profile_for(calib::Percentile::p50).lte_spectral_eff == 3.28);
}

TEST_CASE("values are parsed into their fields") {
    const auto cfg = parse_config(R"([run]
seeds = 3, 5, 8
percentiles = p5, p50
horizon_s = 4
direction = 7
band_integration = grid
n_freq_samples = 128

[scenario]
carrier_hz = 60e9
ue_speed_mps = 2.5
motion_azimuth_deg = 90

[arrays]
bs_rows = 4
bs_sync_pattern = fixed_beam
fixed_beam_azimuth_deg = 30

[sync]
n_sig = 8
placement = comb

[blockage]
kind = plate
hold_s = 0.5

[filters]
none = false
alphas = 0.1, 0.5
windows = 2, 8

[sounder]
taps = 0:1, 7:0.5:90
snr_db = inf
cfo_hz = -12e3

[output]
dir = results
)");
    CHECK(cfg.seeds == std::vector<std::uint64_t>{3, 5, 8});
    CHECK(cfg.percentiles.size() == 2);
    CHECK(cfg.scenario.horizon_s == 4.0);
    CHECK(cfg.scenario.direction == 7);
    CHECK(cfg.scenario.integration.method == BandIntegration::grid);
    CHECK(cfg.scenario.integration.n_freq_samples == 128);
    CHECK(cfg.scenario.channel.carrier_hz == 60e9);
    CHECK(*cfg.scenario.channel.motion_azimuth == doctest::Approx(std::numbers::pi / 2));
    CHECK(cfg.scenario.bs.rows == 4);
    CHECK(cfg.scenario.bs_pattern == SyncPattern::fixed_beam);
    CHECK(cfg.scenario.fixed_beam_azimuth == doctest::Approx(deg_to_rad(30.0)));
    CHECK(cfg.scenario.sync.n_sig == 8);
    CHECK(cfg.scenario.sync.placement == SubSignalPlacement::comb);
    CHECK(cfg.scenario.blockage.synthetic.event_kind == blockage::EventKind::plate);
    CHECK(cfg.scenario.blockage.synthetic.depth_db == 35.0);
    CHECK(cfg.scenario.blockage.synthetic.hold_s == 0.5);
    REQUIRE(cfg.filters.size() == 4);
    CHECK(cfg.filters[0].id() == "fo_a0.1");
    CHECK(cfg.filters[3].id() == "ma_m8");
    REQUIRE(cfg.sounder.taps.size() == 2);
    CHECK(cfg.sounder.taps[1].delay_samples == 7);
    CHECK(std::abs(cfg.sounder.taps[1].gain - cplx(0.0, 0.5)) < 1e-12);
    CHECK(std::isinf(cfg.sounder.snr_db));
    CHECK(cfg.sounder.cfo_hz == -12e3);
    CHECK(cfg.output_dir == "results");
}

TEST_CASE("empty filter list") {
    const auto cfg = parse_config("[filters]\nnone = false\nalphas =\nwindows =\n");
    CHECK(cfg.filters.empty());
}

TEST_CASE("unknown keys and bad values are rejected with their field path") {
    CHECK(config_error("[scenario]\ncarier_hz = 28e9\n").find("scenario.carier_hz") != std::string::npos);
    CHECK(config_error("[scenaro]\ncarrier_hz = 28e9\n").find("scenaro") != std::string::npos);
    CHECK(config_error("[scenario]\ncarrier_hz = fast\n").find("scenario.carrier_hz") != std::string::npos);
    CHECK(config_error("[scenario]\ncarrier_hz = -1\n").find("carrier_hz") != std::string::npos);
    CHECK(config_error("[sync]\nn_sig = 600\n").find("n_sig") != std::string::npos);
    CHECK(config_error("[run]\nseeds =\n").find("seeds") != std::string::npos);
    CHECK(config_error("[run]\npercentiles = p95\n").find("run.percentiles") != std::string::npos);
    CHECK(config_error("[filters]\nalphas = 1.5\n").find("filters") != std::string::npos);
    CHECK(config_error("[blockage]\nsource = file\n").find("blockage.file") != std::string::npos);
    CHECK(config_error("[sounder]\ntaps = 3\n").find("sounder.taps") != std::string::npos);
    CHECK(config_error("[sounder]\ncfo_hypotheses = 4\n").find("cfo_hypotheses") != std::string::npos);
    CHECK_FALSE(config_error("[run\nseeds = 1\n").empty());
}

TEST_CASE("blockage trace files resolve relative to the config") {
    const fs::path dir = fs::path(MMWSNR_TEST_TMP) / "config";
    fs::create_directories(dir);
    {
        std::ofstream out(dir / "trace.csv");
        out << "sample_period_s,0.5\n1\n0.5\n0.25\n";
    }
    {
        std::ofstream out(dir / "run.ini");
        out << "[blockage]\nsource = file\nfile = trace.csv\n";
    }
    const auto cfg = load_config(dir / "run.ini");
    REQUIRE(cfg.scenario.blockage.is_measured());
    CHECK(cfg.scenario.blockage.measured->size() == 3);
    CHECK(cfg.blockage_file == dir / "trace.csv");
    CHECK_THROWS_AS(load_config(dir / "missing.ini"), IoError);
}

TEST_CASE("resolved config serializes every section") {
    const auto j = to_json(parse_config("[scenario]\nmotion_azimuth_deg = random\n"));
    for (const char* key : {"run", "scenario", "arrays", "sync", "link", "blockage", "rate", "filters", "sweep", "sounder", "output"})
        CHECK(j.contains(key));
    CHECK(j["scenario"]["motion_azimuth_deg"] == "random");
    CHECK(j["sync"]["n_dir"] == 16);
    CHECK(j["filters"].size() == 3);
    CHECK(j["blockage"]["kind"] == "walker");
}
