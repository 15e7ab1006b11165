// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mmwsnr Authors

#include "mmwsnr/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "mmwsnr/csv.hpp"
#include "mmwsnr/error.hpp"
#include "mmwsnr/units.hpp"

namespace mmw {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& allowed_keys() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"run",
         {"seeds", "percentiles", "horizon_s", "direction", "eval_skip", "cdf_points", "band_integration",
          "n_freq_samples"}},
        {"scenario",
         {"carrier_hz", "bandwidth_hz", "ue_speed_mps", "motion_azimuth_deg", "path_count_mean", "delay_spread_s",
          "power_decay_db_per_ns"}},
        {"arrays",
         {"bs_rows", "bs_cols", "ue_rows", "ue_cols", "element_spacing", "bs_sync_pattern", "fixed_beam_azimuth_deg"}},
        {"sync", {"t_per_s", "t_sig_s", "n_sig", "w_sig_hz", "n_dir", "placement"}},
        {"link", {"ptx_w", "n0_w_per_hz"}},
        {"blockage",
         {"source", "file", "kind", "depth_db", "event_rate_hz", "transition_s", "hold_s", "duration_s",
          "sample_period_s", "ramp"}},
        {"rate", {"rho_p50", "rho_p5", "lte_bw_hz", "mmw_bw_hz", "mmw_multiplier", "overhead_delta", "n_tx"}},
        {"filters", {"none", "alphas", "windows", "first_order_init"}},
        {"sweep", {"target_min_db", "target_max_db", "target_step_db"}},
        {"sounder",
         {"n_points", "sample_rate_hz", "avg_symbols", "cfo_hypotheses", "cfo_span_hz", "decimation",
          "frame_period_s", "taps", "cfo_hz", "snr_db", "duration_s", "pdp_export_every", "capture_file", "seed"}},
        {"output", {"dir"}},
    };
    return keys;
}

// Typed access to one section with the field path in every error message.
class Section {
public:
    Section(const pt::ptree* tree, std::string name) : tree_(tree), name_(std::move(name)) {}

    std::optional<std::string> text(const std::string& key) const {
        if (!tree_) return std::nullopt;
        const auto v = tree_->get_optional<std::string>(pt::ptree::path_type(key, '\0'));
        if (!v) return std::nullopt;
        return std::string(csv::trim(*v));
    }

    template <typename T>
    void read(const std::string& key, T& out) const {
        const auto v = text(key);
        if (!v) return;
        try {
            out = convert<T>(*v);
        } catch (const Error& e) {
            throw ConfigError(name_ + "." + key + ": " + e.what());
        }
    }

    std::string path(const std::string& key) const { return name_ + "." + key; }

private:
    template <typename T>
    static T convert(const std::string& v) {
        if constexpr (std::is_same_v<T, double>) {
            return csv::parse_double(v);
        } else if constexpr (std::is_same_v<T, bool>) {
            if (v == "true" || v == "1" || v == "yes") return true;
            if (v == "false" || v == "0" || v == "no") return false;
            throw ConfigError("expected a boolean, got '" + v + "'");
        } else if constexpr (std::is_same_v<T, std::uint64_t>) {
            const long long x = csv::parse_int(v);
            if (x < 0) throw ConfigError("expected a nonnegative integer");
            return static_cast<std::uint64_t>(x);
        } else if constexpr (std::is_same_v<T, std::size_t>) {
            const long long x = csv::parse_int(v);
            if (x < 0) throw ConfigError("expected a nonnegative integer");
            return static_cast<std::size_t>(x);
        } else {
            static_assert(std::is_same_v<T, int>);
            return static_cast<int>(csv::parse_int(v));
        }
    }

    const pt::ptree* tree_;
    std::string name_;
};

std::vector<std::string> list_items(const std::string& text) {
    std::vector<std::string> out;
    for (const auto item : csv::split(text))
        if (!item.empty()) out.emplace_back(item);
    return out;
}

template <typename F>
void with_context(const std::string& path, F&& f) {
    try {
        f();
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    } catch (const ParseError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

std::vector<sounder::Tap> parse_taps(const std::string& text) {
    // delay:amplitude[:phase_deg], comma separated
    std::vector<sounder::Tap> taps;
    for (const auto& item : list_items(text)) {
        const auto parts = csv::split(item, ':');
        if (parts.size() < 2 || parts.size() > 3)
            throw ConfigError("tap '" + item + "' is not delay:amplitude[:phase_deg]");
        const int delay = static_cast<int>(csv::parse_int(parts[0]));
        const double amp = csv::parse_double(parts[1]);
        const double phase = parts.size() == 3 ? deg_to_rad(csv::parse_double(parts[2])) : 0.0;
        taps.push_back({delay, std::polar(amp, phase)});
    }
    if (taps.empty()) throw ConfigError("at least one tap is required");
    return taps;
}

}  // namespace

std::vector<double> SweepGrid::values() const {
    if (!(step_db > 0.0)) throw ConfigError("sweep.target_step_db must be > 0");
    if (!(max_db >= min_db)) throw ConfigError("sweep.target_max_db must be >= sweep.target_min_db");
    std::vector<double> out;
    const auto n = static_cast<long long>(std::floor((max_db - min_db) / step_db + 1e-9));
    for (long long i = 0; i <= n; ++i) out.push_back(min_db + static_cast<double>(i) * step_db);
    return out;
}

calib::RateProfile ExperimentConfig::profile_for(calib::Percentile p) const {
    calib::RateProfile profile = rate;
    profile.percentile = p;
    profile.lte_spectral_eff = p == calib::Percentile::p50 ? rho_p50 : rho_p5;
    return profile;
}

void ExperimentConfig::validate() const {
    scenario.validate();
    if (seeds.empty()) throw ConfigError("run.seeds must list at least one seed");
    if (percentiles.empty()) throw ConfigError("run.percentiles must list at least one percentile");
    for (const auto& f : filters) f.validate();
    profile_for(calib::Percentile::p5).validate();
    profile_for(calib::Percentile::p50).validate();
    if (cdf_points < 1) throw ConfigError("run.cdf_points must be >= 1");
    sweep.values();
    sounder.sounder.validate();
    if (!(sounder.duration_s > 0.0)) throw ConfigError("sounder.duration_s must be > 0");
    if (sounder.pdp_export_every < 1) throw ConfigError("sounder.pdp_export_every must be >= 1");
    if (output_dir.empty()) throw ConfigError("output.dir must not be empty");
}

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
    pt::ptree tree;
    try {
        std::istringstream in(text);
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config syntax error: ") + e.message() + " (line " + std::to_string(e.line()) + ")");
    }

    for (const auto& [section, body] : tree) {
        const auto it = allowed_keys().find(section);
        if (it == allowed_keys().end()) {
            if (body.empty()) throw ConfigError("unknown top-level key '" + section + "' (keys belong in sections)");
            throw ConfigError("unknown config section [" + section + "]");
        }
        for (const auto& [key, value] : body) {
            if (!it->second.contains(key)) throw ConfigError("unknown config key " + section + "." + key);
        }
    }

    auto section = [&](const std::string& name) {
        const auto child = tree.get_child_optional(name);
        return Section(child ? &*child : nullptr, name);
    };

    ExperimentConfig cfg;
    Scenario& sc = cfg.scenario;

    const Section run = section("run");
    if (const auto v = run.text("seeds")) {
        with_context(run.path("seeds"), [&] {
            cfg.seeds.clear();
            for (const auto& item : list_items(*v)) {
                const long long s = csv::parse_int(item);
                if (s < 0) throw ConfigError("seeds must be nonnegative");
                cfg.seeds.push_back(static_cast<std::uint64_t>(s));
            }
        });
    }
    if (const auto v = run.text("percentiles")) {
        with_context(run.path("percentiles"), [&] {
            cfg.percentiles.clear();
            for (const auto& item : list_items(*v)) cfg.percentiles.push_back(calib::parse_percentile(item));
        });
    }
    run.read("horizon_s", sc.horizon_s);
    if (const auto v = run.text("direction")) {
        with_context(run.path("direction"), [&] {
            if (*v == "auto") sc.direction.reset();
            else sc.direction = static_cast<int>(csv::parse_int(*v));
        });
    }
    run.read("eval_skip", cfg.eval_skip);
    run.read("cdf_points", cfg.cdf_points);
    if (const auto v = run.text("band_integration")) {
        with_context(run.path("band_integration"), [&] {
            if (*v == "closed_form") sc.integration.method = BandIntegration::closed_form;
            else if (*v == "grid") sc.integration.method = BandIntegration::grid;
            else throw ConfigError("expected closed_form or grid, got '" + *v + "'");
        });
    }
    run.read("n_freq_samples", sc.integration.n_freq_samples);

    const Section scen = section("scenario");
    scen.read("carrier_hz", sc.channel.carrier_hz);
    scen.read("bandwidth_hz", sc.channel.bandwidth_hz);
    scen.read("ue_speed_mps", sc.channel.ue_speed_mps);
    if (const auto v = scen.text("motion_azimuth_deg")) {
        with_context(scen.path("motion_azimuth_deg"), [&] {
            if (*v == "random") sc.channel.motion_azimuth.reset();
            else sc.channel.motion_azimuth = deg_to_rad(csv::parse_double(*v));
        });
    }
    scen.read("path_count_mean", sc.channel.path_count_mean);
    scen.read("delay_spread_s", sc.channel.delay_spread_s);
    scen.read("power_decay_db_per_ns", sc.channel.power_decay_db_per_ns);

    const Section arrays = section("arrays");
    arrays.read("bs_rows", sc.bs.rows);
    arrays.read("bs_cols", sc.bs.cols);
    arrays.read("ue_rows", sc.ue.rows);
    arrays.read("ue_cols", sc.ue.cols);
    double spacing = 0.5;
    arrays.read("element_spacing", spacing);
    sc.bs.element_spacing = sc.ue.element_spacing = spacing;
    if (const auto v = arrays.text("bs_sync_pattern"))
        with_context(arrays.path("bs_sync_pattern"), [&] { sc.bs_pattern = parse_sync_pattern(*v); });
    double beam_deg = 0.0;
    arrays.read("fixed_beam_azimuth_deg", beam_deg);
    sc.fixed_beam_azimuth = deg_to_rad(beam_deg);

    const Section sync = section("sync");
    sync.read("t_per_s", sc.sync.t_per_s);
    sync.read("t_sig_s", sc.sync.t_sig_s);
    sync.read("n_sig", sc.sync.n_sig);
    sync.read("w_sig_hz", sc.sync.w_sig_hz);
    sync.read("n_dir", sc.sync.n_dir);
    if (const auto v = sync.text("placement"))
        with_context(sync.path("placement"), [&] { sc.sync.placement = parse_placement(*v); });

    const Section link = section("link");
    link.read("ptx_w", sc.link.ptx_w);
    link.read("n0_w_per_hz", sc.link.n0_w_per_hz);

    const Section blk = section("blockage");
    auto& spec = sc.blockage.synthetic;
    if (const auto v = blk.text("kind"))
        with_context(blk.path("kind"), [&] { spec = blockage::BlockageEventSpec::defaults(blockage::parse_event_kind(*v)); });
    blk.read("depth_db", spec.depth_db);
    blk.read("event_rate_hz", spec.event_rate_hz);
    blk.read("transition_s", spec.transition_s);
    blk.read("hold_s", spec.hold_s);
    blk.read("duration_s", spec.duration_s);
    blk.read("sample_period_s", spec.sample_period_s);
    if (const auto v = blk.text("ramp"))
        with_context(blk.path("ramp"), [&] { spec.ramp = blockage::parse_ramp_shape(*v); });
    const std::string source = blk.text("source").value_or("synthetic");
    if (source == "file") {
        const auto file = blk.text("file");
        if (!file || file->empty()) throw ConfigError("blockage.file is required when blockage.source = file");
        cfg.blockage_file = base_dir / *file;
        sc.blockage.measured = std::make_shared<const blockage::BlockageTrace>(blockage::load_trace(*cfg.blockage_file));
    } else if (source != "synthetic") {
        throw ConfigError("blockage.source: expected synthetic or file, got '" + source + "'");
    } else if (blk.text("file")) {
        throw ConfigError("blockage.file is only valid with blockage.source = file");
    }

    const Section rate = section("rate");
    rate.read("rho_p50", cfg.rho_p50);
    rate.read("rho_p5", cfg.rho_p5);
    rate.read("lte_bw_hz", cfg.rate.lte_bw_hz);
    rate.read("mmw_bw_hz", cfg.rate.mmw_bw_hz);
    rate.read("mmw_multiplier", cfg.rate.mmw_multiplier);
    rate.read("overhead_delta", cfg.rate.overhead_delta);
    rate.read("n_tx", cfg.rate.n_tx);

    const Section filt = section("filters");
    if (filt.text("none") || filt.text("alphas") || filt.text("windows") || filt.text("first_order_init")) {
        bool include_none = true;
        filt.read("none", include_none);
        auto init = FirstOrderInit::first_sample;
        if (const auto v = filt.text("first_order_init")) {
            if (*v == "zero") init = FirstOrderInit::zero;
            else if (*v != "first_sample")
                throw ConfigError("filters.first_order_init: expected first_sample or zero, got '" + *v + "'");
        }
        cfg.filters.clear();
        if (include_none) cfg.filters.push_back(FilterSpec::none());
        const auto alphas = filt.text("alphas").value_or("0.3");
        with_context(filt.path("alphas"), [&] {
            for (const auto& a : list_items(alphas)) cfg.filters.push_back(FilterSpec::first_order(csv::parse_double(a), init));
        });
        const auto windows = filt.text("windows").value_or("4");
        with_context(filt.path("windows"), [&] {
            for (const auto& m : list_items(windows))
                cfg.filters.push_back(FilterSpec::moving_average(static_cast<int>(csv::parse_int(m))));
        });
        for (const auto& f : cfg.filters) with_context("filters", [&] { f.validate(); });
    }

    const Section sweep = section("sweep");
    sweep.read("target_min_db", cfg.sweep.min_db);
    sweep.read("target_max_db", cfg.sweep.max_db);
    sweep.read("target_step_db", cfg.sweep.step_db);

    const Section snd = section("sounder");
    auto& sd = cfg.sounder;
    snd.read("n_points", sd.sounder.n_points);
    snd.read("sample_rate_hz", sd.sounder.sample_rate_hz);
    snd.read("avg_symbols", sd.sounder.avg_symbols);
    snd.read("cfo_hypotheses", sd.sounder.cfo_hypotheses);
    snd.read("cfo_span_hz", sd.sounder.cfo_span_hz);
    snd.read("decimation", sd.sounder.decimation);
    snd.read("frame_period_s", sd.sounder.frame_period_s);
    if (const auto v = snd.text("taps")) with_context(snd.path("taps"), [&] { sd.taps = parse_taps(*v); });
    snd.read("cfo_hz", sd.cfo_hz);
    if (const auto v = snd.text("snr_db")) {
        with_context(snd.path("snr_db"), [&] {
            sd.snr_db = (*v == "inf" || *v == "none") ? std::numeric_limits<double>::infinity() : csv::parse_double(*v);
        });
    }
    snd.read("duration_s", sd.duration_s);
    snd.read("pdp_export_every", sd.pdp_export_every);
    if (const auto v = snd.text("capture_file"); v && !v->empty()) sd.capture_file = base_dir / *v;
    snd.read("seed", sd.seed);

    const Section out = section("output");
    if (const auto v = out.text("dir")) cfg.output_dir = *v;

    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
    using nlohmann::json;
    const Scenario& sc = cfg.scenario;
    json j;

    json seeds = json::array();
    for (auto s : cfg.seeds) seeds.push_back(s);
    json pcts = json::array();
    for (auto p : cfg.percentiles) pcts.push_back(std::string(calib::to_string(p)));
    j["run"] = {{"seeds", seeds},
                {"percentiles", pcts},
                {"horizon_s", sc.horizon_s},
                {"direction", sc.direction ? json(*sc.direction) : json("auto")},
                {"eval_skip", cfg.eval_skip},
                {"cdf_points", cfg.cdf_points},
                {"band_integration", sc.integration.method == BandIntegration::closed_form ? "closed_form" : "grid"},
                {"n_freq_samples", sc.integration.n_freq_samples}};
    j["scenario"] = {{"carrier_hz", sc.channel.carrier_hz},
                     {"bandwidth_hz", sc.channel.bandwidth_hz},
                     {"ue_speed_mps", sc.channel.ue_speed_mps},
                     {"motion_azimuth_deg",
                      sc.channel.motion_azimuth ? json(rad_to_deg(*sc.channel.motion_azimuth)) : json("random")},
                     {"path_count_mean", sc.channel.path_count_mean},
                     {"delay_spread_s", sc.channel.delay_spread_s},
                     {"power_decay_db_per_ns", sc.channel.power_decay_db_per_ns}};
    j["arrays"] = {{"bs_rows", sc.bs.rows},
                   {"bs_cols", sc.bs.cols},
                   {"ue_rows", sc.ue.rows},
                   {"ue_cols", sc.ue.cols},
                   {"element_spacing", sc.bs.element_spacing},
                   {"bs_sync_pattern", std::string(to_string(sc.bs_pattern))},
                   {"fixed_beam_azimuth_deg", rad_to_deg(sc.fixed_beam_azimuth)}};
    j["sync"] = {{"t_per_s", sc.sync.t_per_s},   {"t_sig_s", sc.sync.t_sig_s}, {"n_sig", sc.sync.n_sig},
                 {"w_sig_hz", sc.sync.w_sig_hz}, {"n_dir", sc.sync.n_dir},
                 {"placement", std::string(to_string(sc.sync.placement))}};
    j["link"] = {{"ptx_w", sc.link.ptx_w}, {"n0_w_per_hz", sc.link.n0_w_per_hz}};
    const auto& b = sc.blockage.synthetic;
    if (cfg.blockage_file) {
        j["blockage"] = {{"source", "file"}, {"file", cfg.blockage_file->generic_string()}};
    } else {
        j["blockage"] = {{"source", "synthetic"},
                         {"kind", std::string(blockage::to_string(b.event_kind))},
                         {"depth_db", b.depth_db},
                         {"event_rate_hz", b.event_rate_hz},
                         {"transition_s", b.transition_s},
                         {"hold_s", b.hold_s},
                         {"duration_s", b.duration_s},
                         {"sample_period_s", b.sample_period_s},
                         {"ramp", std::string(blockage::to_string(b.ramp))}};
    }
    j["rate"] = {{"rho_p50", cfg.rho_p50},
                 {"rho_p5", cfg.rho_p5},
                 {"lte_bw_hz", cfg.rate.lte_bw_hz},
                 {"mmw_bw_hz", cfg.rate.mmw_bw_hz},
                 {"mmw_multiplier", cfg.rate.mmw_multiplier},
                 {"overhead_delta", cfg.rate.overhead_delta},
                 {"n_tx", cfg.rate.n_tx}};
    json filters = json::array();
    for (const auto& f : cfg.filters) filters.push_back(f.id());
    j["filters"] = filters;
    j["sweep"] = {{"target_min_db", cfg.sweep.min_db},
                  {"target_max_db", cfg.sweep.max_db},
                  {"target_step_db", cfg.sweep.step_db}};
    const auto& sd = cfg.sounder;
    json taps = json::array();
    for (const auto& t : sd.taps) taps.push_back({{"delay", t.delay_samples}, {"re", t.gain.real()}, {"im", t.gain.imag()}});
    j["sounder"] = {{"n_points", sd.sounder.n_points},
                    {"sample_rate_hz", sd.sounder.sample_rate_hz},
                    {"avg_symbols", sd.sounder.avg_symbols},
                    {"cfo_hypotheses", sd.sounder.cfo_hypotheses},
                    {"cfo_span_hz", sd.sounder.cfo_span_hz},
                    {"decimation", sd.sounder.decimation},
                    {"frame_period_s", sd.sounder.frame_period_s},
                    {"taps", taps},
                    {"cfo_hz", sd.cfo_hz},
                    {"snr_db", std::isfinite(sd.snr_db) ? json(sd.snr_db) : json("inf")},
                    {"duration_s", sd.duration_s},
                    {"pdp_export_every", sd.pdp_export_every},
                    {"capture_file", sd.capture_file ? json(sd.capture_file->generic_string()) : json(nullptr)},
                    {"seed", sd.seed}};
    j["output"] = {{"dir", cfg.output_dir.generic_string()}};
    return j;
}

}  // namespace mmw
