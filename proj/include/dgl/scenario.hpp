#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dgl/game_math.hpp"
#include "dgl/immpf.hpp"

namespace dgl {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Every scenario constant, defaulted to the nominal study values.
struct ScenarioConfig {
    // players
    double pursuer_accel_max_g = 45.0;
    double pursuer_time_constant = 0.2;
    double pursuer_speed = 2500.0;
    double evader_accel_max_g = 20.0;
    double evader_time_constant = 0.2;
    double evader_speed = 2500.0;

    // engagement
    double sample_rate_hz = 100.0;
    double nominal_duration = 3.0;
    double initial_range = 15000.0;
    double lateral_offset = 0.0;
    double hard_stop_factor = 1.5;
    int evader_initial_mode = 1;

    // measurement
    double bearing_noise_std = 0.5e-3;

    // radar initialization
    double radar_range_std = 50.0;
    double radar_bearing_std_deg = 1.0;
    double radar_path_angle_std_deg = 3.0;
    double radar_accel_std = 10.0;
    double radar_offset_x = 0.0;
    double radar_offset_y = 0.0;

    // mode transition model
    TransitionModel tpm;

    // filter
    int particles_per_mode = 500;
    ProcessNoise process_noise;

    // decision
    double tau_max = 0.16;
    double chatter_fraction = 0.7;
    double risk_epsilon = 1e-6;
    bool chatter_in_decision = true;

    // trajectory shaping
    int shaping_levels = 21;
    int shaping_subsample = 100;
    int shaping_horizon = 100;
    double shaping_weight_threshold = 0.15;
    double shaping_cutoff = 1.0;

    // Monte Carlo
    int mc_runs = 100;
    std::vector<double> mc_switch_times{1.5, 1.8, 2.1, 2.4, 2.7};
    std::uint64_t master_seed = 1;

    GameGeometry geometry() const;
    Eigen::Matrix4d radar_covariance() const;
    double dt() const { return 1.0 / sample_rate_hz; }
    double hard_stop_time() const { return hard_stop_factor * nominal_duration; }

    void validate() const;  // throws ConfigError
};

/// Sectioned key = value text. Unknown sections or keys are errors.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

}  // namespace dgl
