#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dgl/engagement.hpp"
#include "dgl/guidance.hpp"
#include "dgl/scenario.hpp"

namespace dgl {

struct StepLog {
    double t;
    double x_m, y_m, x_t, y_t;
    double rho, lambda;
    double z_true, z_est;
    double t_go_true, t_go_est;
    double u_m;
    int mode_true;
    int hypothesis_chosen;  // 1..4, 0 = ambiguous, -1 = no decision ran
    bool fast_path_used;
    double cov_tt, cov_tz, cov_zz;  // filter (t_go, z) covariance
    double mode_prob_1;
};

struct DecisionLogRow {
    double t;
    Eigen::Vector4d likelihood, prior, risk;
    int outcome;  // 1..4 or 0 for ambiguous
    bool fast_path;
    int true_hypothesis;
};

struct CloudLogRow {
    double t;
    int index;
    int mode;
    double weight;
    double t_go, z, lambda, gamma_t;
};

struct ShapingLogTimedRow {
    double t;
    ShapingLogRow row;
};

struct RunOptions {
    bool perfect_info = false;    // truth-fed point-mass cloud, estimator bypassed
    bool record_steps = true;
    bool dump_decisions = false;
    bool dump_cloud = false;
    bool dump_shaping = false;
};

struct RunRecord {
    std::uint64_t seed = 0;
    LawKind law = LawKind::Dgl1;
    double switch_time = 0.0;
    double miss = 0.0;
    bool closest_approach_found = false;
    bool hard_stopped = false;
    double wall_seconds = 0.0;
    std::uint64_t meas_noise_checksum = 0;  // CRN verification across laws
    LawCounters counters;
    std::vector<StepLog> steps;
    std::vector<DecisionLogRow> decisions;
    std::vector<CloudLogRow> cloud_dump;
    std::vector<ShapingLogTimedRow> shaping_log;
};

/// One closed-loop engagement: measure -> filter -> decide -> command ->
/// truth step, at the sampling rate, until closing ends (hard stop at
/// hard_stop_factor x nominal duration). Deterministic given the seed; the
/// measurement noise sequence depends only on the seed, not the law.
RunRecord run_single(const ScenarioConfig& cfg, LawKind law, double switch_time,
                     std::uint64_t seed, const RunOptions& opts = {});

/// Truth state at t = 0 for the configured geometry.
TruthState initial_truth(const ScenarioConfig& cfg);

/// Game-space truth as the estimator's coordinates would express it.
GameState truth_game_state(const TruthState& s, const GameGeometry& g);

}  // namespace dgl
