#include "dgl/scenario.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace dgl {

GameGeometry ScenarioConfig::geometry() const {
    return {{pursuer_accel_max_g * kStandardGravity, pursuer_time_constant, pursuer_speed},
            {evader_accel_max_g * kStandardGravity, evader_time_constant, evader_speed}};
}

Eigen::Matrix4d ScenarioConfig::radar_covariance() const {
    const double d2r = M_PI / 180.0;
    Eigen::Vector4d stds(radar_range_std, radar_bearing_std_deg * d2r,
                         radar_path_angle_std_deg * d2r, radar_accel_std);
    return stds.array().square().matrix().asDiagonal();
}

void ScenarioConfig::validate() const {
    const auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) throw ConfigError(std::string("config: ") + name + " must be positive");
    };
    positive(pursuer_accel_max_g, "pursuer_accel_max_g");
    positive(pursuer_time_constant, "pursuer_time_constant");
    positive(pursuer_speed, "pursuer_speed");
    positive(evader_accel_max_g, "evader_accel_max_g");
    positive(evader_time_constant, "evader_time_constant");
    positive(evader_speed, "evader_speed");
    positive(sample_rate_hz, "sample_rate_hz");
    positive(nominal_duration, "nominal_duration");
    positive(initial_range, "initial_range");
    positive(hard_stop_factor, "hard_stop_factor");
    if (std::abs(lateral_offset) >= initial_range)
        throw ConfigError("config: lateral_offset must be smaller than initial_range");
    if (evader_initial_mode != 1 && evader_initial_mode != 2)
        throw ConfigError("config: evader_initial_mode must be 1 or 2");
    if (bearing_noise_std < 0.0) throw ConfigError("config: bearing_noise_std must be >= 0");
    positive(radar_range_std, "radar_range_std");
    positive(radar_bearing_std_deg, "radar_bearing_std_deg");
    positive(radar_path_angle_std_deg, "radar_path_angle_std_deg");
    positive(radar_accel_std, "radar_accel_std");
    if (particles_per_mode < 1) throw ConfigError("config: particles_per_mode must be >= 1");
    if (process_noise.t_go < 0 || process_noise.z < 0 || process_noise.lambda < 0 ||
        process_noise.gamma_t < 0)
        throw ConfigError("config: process noise stds must be >= 0");
    positive(tau_max, "tau_max");
    if (!(chatter_fraction > 0.0 && chatter_fraction <= 1.0))
        throw ConfigError("config: chatter_fraction must be in (0, 1]");
    positive(risk_epsilon, "risk_epsilon");
    if (shaping_levels < 2) throw ConfigError("config: shaping_levels must be >= 2");
    if (shaping_subsample < 1) throw ConfigError("config: shaping_subsample must be >= 1");
    if (shaping_horizon < 1) throw ConfigError("config: shaping_horizon must be >= 1");
    if (!(shaping_weight_threshold >= 0.0 && shaping_weight_threshold <= 1.0))
        throw ConfigError("config: shaping_weight_threshold must be in [0, 1]");
    if (shaping_cutoff < 0.0) throw ConfigError("config: shaping_cutoff must be >= 0");
    if (mc_runs < 1) throw ConfigError("config: mc_runs must be >= 1");
    if (mc_switch_times.empty()) throw ConfigError("config: mc_switch_times must be nonempty");
    // Peak transition probability must stay a probability.
    const double peak = tpm.c12 * tpm.beta / (2.0 * tpm.alpha * std::tgamma(1.0 / tpm.beta));
    if (!(peak >= 0.0 && peak <= 1.0) || !(tpm.pi21 >= 0.0 && tpm.pi21 <= 1.0) ||
        !(tpm.pi12_quiet >= 0.0 && tpm.pi12_quiet <= 1.0))
        throw ConfigError("config: transition probabilities must lie in [0, 1]");
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, const std::string& key) {
    std::size_t pos = 0;
    double out;
    try {
        out = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError("config: bad numeric value for " + key + ": '" + v + "'");
    }
    if (pos != v.size()) throw ConfigError("config: trailing characters in " + key + ": '" + v + "'");
    return out;
}

std::vector<double> parse_list(const std::string& v, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string tok;
    while (ss >> tok) out.push_back(parse_double(tok, key));
    if (out.empty()) throw ConfigError("config: empty list for " + key);
    return out;
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
    ScenarioConfig cfg;
    using Setter = std::function<void(ScenarioConfig&, const std::string&, const std::string&)>;
    const auto dbl = [](double ScenarioConfig::* field) {
        return Setter([field](ScenarioConfig& c, const std::string& k, const std::string& v) {
            c.*field = parse_double(v, k);
        });
    };
    const auto integer = [](int ScenarioConfig::* field) {
        return Setter([field](ScenarioConfig& c, const std::string& k, const std::string& v) {
            const double d = parse_double(v, k);
            if (d != std::floor(d)) throw ConfigError("config: " + k + " must be an integer");
            c.*field = static_cast<int>(d);
        });
    };

    std::map<std::string, Setter> keys = {
        {"players.pursuer_accel_max_g", dbl(&ScenarioConfig::pursuer_accel_max_g)},
        {"players.pursuer_time_constant", dbl(&ScenarioConfig::pursuer_time_constant)},
        {"players.pursuer_speed", dbl(&ScenarioConfig::pursuer_speed)},
        {"players.evader_accel_max_g", dbl(&ScenarioConfig::evader_accel_max_g)},
        {"players.evader_time_constant", dbl(&ScenarioConfig::evader_time_constant)},
        {"players.evader_speed", dbl(&ScenarioConfig::evader_speed)},
        {"engagement.sample_rate_hz", dbl(&ScenarioConfig::sample_rate_hz)},
        {"engagement.nominal_duration", dbl(&ScenarioConfig::nominal_duration)},
        {"engagement.initial_range", dbl(&ScenarioConfig::initial_range)},
        {"engagement.lateral_offset", dbl(&ScenarioConfig::lateral_offset)},
        {"engagement.hard_stop_factor", dbl(&ScenarioConfig::hard_stop_factor)},
        {"engagement.evader_initial_mode", integer(&ScenarioConfig::evader_initial_mode)},
        {"measurement.bearing_noise_std", dbl(&ScenarioConfig::bearing_noise_std)},
        {"radar.range_std", dbl(&ScenarioConfig::radar_range_std)},
        {"radar.bearing_std_deg", dbl(&ScenarioConfig::radar_bearing_std_deg)},
        {"radar.path_angle_std_deg", dbl(&ScenarioConfig::radar_path_angle_std_deg)},
        {"radar.accel_std", dbl(&ScenarioConfig::radar_accel_std)},
        {"radar.offset_x", dbl(&ScenarioConfig::radar_offset_x)},
        {"radar.offset_y", dbl(&ScenarioConfig::radar_offset_y)},
        {"tpm.pi21",
         Setter([](ScenarioConfig& c, const std::string& k, const std::string& v) {
             c.tpm.pi21 = parse_double(v, k);
         })},
        {"tpm.pi12_quiet",
         Setter([](ScenarioConfig& c, const std::string& k, const std::string& v) {
             c.tpm.pi12_quiet = parse_double(v, k);
         })},
        {"tpm.quiet_until",
         Setter([](ScenarioConfig& c, const std::string& k, const std::string& v) {
             c.tpm.t_s = parse_double(v, k);
         })},
        {"tpm.c12",
         Setter([](ScenarioConfig& c, const std::string& k, const std::string& v) {
             c.tpm.c12 = parse_double(v, k);
         })},
        {"tpm.peak_time",
         Setter([](ScenarioConfig& c, const std::string& k, const std::string& v) {
             c.tpm.mu = parse_double(v, k);
         })},
        {"tpm.shape",
         Setter([](ScenarioConfig& c, const std::string& k, const std::string& v) {
             c.tpm.beta = parse_double(v, k);
         })},
        {"tpm.scale",
         Setter([](ScenarioConfig& c, const std::string& k, const std::string& v) {
             c.tpm.alpha = parse_double(v, k);
         })},
        {"filter.particles_per_mode", integer(&ScenarioConfig::particles_per_mode)},
        {"filter.noise_t_go",
         Setter([](ScenarioConfig& c, const std::string& k, const std::string& v) {
             c.process_noise.t_go = parse_double(v, k);
         })},
        {"filter.noise_zem",
         Setter([](ScenarioConfig& c, const std::string& k, const std::string& v) {
             c.process_noise.z = parse_double(v, k);
         })},
        {"filter.noise_los",
         Setter([](ScenarioConfig& c, const std::string& k, const std::string& v) {
             c.process_noise.lambda = parse_double(v, k);
         })},
        {"filter.noise_path_angle",
         Setter([](ScenarioConfig& c, const std::string& k, const std::string& v) {
             c.process_noise.gamma_t = parse_double(v, k);
         })},
        {"decision.tau_max", dbl(&ScenarioConfig::tau_max)},
        {"decision.chatter_fraction", dbl(&ScenarioConfig::chatter_fraction)},
        {"decision.risk_epsilon", dbl(&ScenarioConfig::risk_epsilon)},
        {"decision.chatter_in_decision",
         Setter([](ScenarioConfig& c, const std::string& k, const std::string& v) {
             if (v == "true" || v == "1")
                 c.chatter_in_decision = true;
             else if (v == "false" || v == "0")
                 c.chatter_in_decision = false;
             else
                 throw ConfigError("config: " + k + " must be true/false");
         })},
        {"shaping.command_levels", integer(&ScenarioConfig::shaping_levels)},
        {"shaping.subsample", integer(&ScenarioConfig::shaping_subsample)},
        {"shaping.horizon_steps", integer(&ScenarioConfig::shaping_horizon)},
        {"shaping.weight_threshold", dbl(&ScenarioConfig::shaping_weight_threshold)},
        {"shaping.cutoff_time_to_go", dbl(&ScenarioConfig::shaping_cutoff)},
        {"mc.runs_per_point", integer(&ScenarioConfig::mc_runs)},
        {"mc.switch_times",
         Setter([](ScenarioConfig& c, const std::string& k, const std::string& v) {
             c.mc_switch_times = parse_list(v, k);
         })},
        {"mc.master_seed",
         Setter([](ScenarioConfig& c, const std::string& k, const std::string& v) {
             try {
                 c.master_seed = std::stoull(v);
             } catch (const std::exception&) {
                 throw ConfigError("config: bad seed '" + v + "'");
             }
         })},
    };

    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) + ": bad section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = section + "." + trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = keys.find(key);
        if (it == keys.end())
            throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key +
                              "'");
        it->second(cfg, key, value);
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

}  // namespace dgl
