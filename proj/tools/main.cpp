// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mmwsnr Authors

// mmwsnr <trace|sweep|sounder|selfcheck> [--config FILE] [--output-dir DIR]
//
// Everything except the output location comes from the config file.
// MMWSNR_OUTPUT_DIR overrides output.dir; --output-dir overrides both.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mmwsnr/config.hpp"
#include "mmwsnr/error.hpp"
#include "mmwsnr/experiment.hpp"

namespace {

mmw::ExperimentConfig resolve(const std::string& config_path, const std::string& output_dir) {
    mmw::ExperimentConfig cfg = config_path.empty() ? mmw::parse_config("") : mmw::load_config(config_path);
    if (const char* env = std::getenv("MMWSNR_OUTPUT_DIR"); env && *env) cfg.output_dir = env;
    if (!output_dir.empty()) cfg.output_dir = output_dir;
    return cfg;
}

void report(const mmw::RunOutputs& out) {
    for (const auto& f : out.files) std::cout << f.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wideband mmWave SNR tracking simulator"};
    app.require_subcommand(1);
    std::string config_path;
    std::string output_dir;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("-c,--config", config_path, "INI config file (defaults when omitted)")->check(CLI::ExistingFile);
        sub->add_option("-o,--output-dir", output_dir, "output directory");
    };
    auto* trace = app.add_subcommand("trace", "true, raw and filtered SNR traces");
    auto* sweep = app.add_subcommand("sweep", "mean error versus target SNR");
    auto* sounder = app.add_subcommand("sounder", "channel sounder blockage extraction demo");
    auto* check = app.add_subcommand("selfcheck", "fast invariant checks");
    add_common(trace);
    add_common(sweep);
    add_common(sounder);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : static_cast<int>(mmw::ErrorCategory::config);
    }

    try {
        if (*check) {
            const int failures = mmw::selfcheck(std::cout);
            std::cout << (failures == 0 ? "selfcheck passed" : "selfcheck FAILED") << '\n';
            return failures == 0 ? 0 : static_cast<int>(mmw::ErrorCategory::runtime);
        }
        const auto cfg = resolve(config_path, output_dir);
        if (*trace) report(mmw::run_trace(cfg));
        if (*sweep) report(mmw::run_sweep(cfg));
        if (*sounder) {
            const auto res = mmw::run_sounder_demo(cfg);
            report(res.outputs);
            std::cout << res.n_frames << " PDP frames, " << res.n_blockage_samples << " blockage samples at "
                      << res.blockage_period_s * 1e6 << " us\n";
        }
    } catch (const mmw::Error& e) {
        std::cerr << "mmwsnr: " << e.what() << '\n';
        return static_cast<int>(e.category());
    } catch (const std::exception& e) {
        std::cerr << "mmwsnr: " << e.what() << '\n';
        return static_cast<int>(mmw::ErrorCategory::runtime);
    }
    return 0;
}
