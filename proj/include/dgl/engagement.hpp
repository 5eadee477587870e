#pragma once

#include <Eigen/Dense>
#include <vector>

#include "dgl/game_dynamics.hpp"
#include "dgl/game_math.hpp"
#include "dgl/rng.hpp"

namespace dgl {

// Planar inertial truth. The interceptor's path angle is measured from +X_I;
// the target's from -X_I (mirrored), so v_T = V_T*(-cos(gamma_t), sin(gamma_t)).
// That convention makes the polar-coordinate relations below exact with
// delta_m = gamma_m - lambda and delta_t = gamma_t + lambda.
struct TruthState {
    double x_m, y_m;
    double x_t, y_t;
    double gamma_m, gamma_t;
    double a_m, a_t;
    int mode;  // active target maneuver mode, 1 or 2
    double t;
};

/// Single bang-bang switch: initial_mode until switch_time, flipped after.
struct EvaderPolicy {
    double switch_time;
    int initial_mode = 1;
};

int evader_mode_at(const EvaderPolicy& p, double t);
double evader_command(int mode, const GameGeometry& g);  // +a_T^max for mode 1, - for mode 2

struct Measurement {
    double t;
    double y;  // bearing gamma_m - lambda plus noise [rad]
};

struct RelativeState {
    double rho;
    double lambda;
    double v_rho;
    double v_lambda;
    double delta_m;
    double delta_t;
};

RelativeState derive_relative(const TruthState& s, const GameGeometry& g);

/// RK4 step over dt with zero-order-hold u_m; the evader mode switch is
/// split onto an integrator boundary so the bang lands exactly at switch_time.
TruthState step_truth(const TruthState& s, double u_m, const EvaderPolicy& policy, double dt,
                      const GameGeometry& g);

Measurement measure(const TruthState& s, double sigma, RngStream& rng, const GameGeometry& g);

/// Initialization packet handed to the filter: the radar's noisy estimate of
/// (rho_r, lambda_r, gamma_t, a_t), its covariance, and the geometry plus
/// own-ship channel needed to map samples into game space.
struct RadarSnapshot {
    Eigen::Vector4d mean;
    Eigen::Matrix4d cov;
    double radar_x, radar_y;
    double interceptor_x, interceptor_y;
    double own_gamma_m, own_a_m;
};

RadarSnapshot make_radar_snapshot(const TruthState& s, const Eigen::Matrix4d& cov, double radar_x,
                                  double radar_y, RngStream& rng);

/// Maps one radar-coordinate sample (rho_r, lambda_r, gamma_t, a_t) through
/// the offset-radar geometry into a game state.
GameState radar_to_game(const RadarSnapshot& snap, const Eigen::Vector4d& sample,
                        const GameGeometry& g);

struct MissResult {
    double miss;
    bool closest_approach_found;
};

/// Minimum range over sampled (t, rho), refined by quadratic interpolation of
/// rho^2 through the bracketing triple (exact for straight-line motion).
MissResult miss_distance(const std::vector<double>& t, const std::vector<double>& rho);

}  // namespace dgl
