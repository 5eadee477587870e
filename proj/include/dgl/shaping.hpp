#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "dgl/game_dynamics.hpp"
#include "dgl/immpf.hpp"

namespace dgl {

struct AdmissibleSet {
    std::vector<double> candidates;  // commands surviving the weight-threshold constraint
    double w_thres = 0.15;
};

/// n_levels commands uniformly spaced on [-a_max, a_max], kept when applying
/// the command for one measurement interval (closed-form ZEM step,
/// mode-matched target command) leaves at most w_thres weight outside the
/// singular region.
AdmissibleSet admissible_commands(const ParticleCloud& cloud, int n_levels, double w_thres,
                                  double dt, const GameGeometry& g);

struct InfoState {
    Eigen::Matrix4d fim = Eigen::Matrix4d::Zero();
    int steps = 0;
    bool stopped_by_engagement_end = false;
    bool regularized = false;
};

/// One recursive posterior-information step:
/// J+ = (Qd + F J^-1 F^T)^-1 + H^T R^-1 H with the bearing row H = [0,0,-1,0].
/// Singular J is ridge-regularized (flag reported via InfoState).
Eigen::Matrix4d fim_step(const Eigen::Matrix4d& j, const Eigen::Matrix4d& f,
                         const Eigen::Matrix4d& qd, double sigma, bool* regularized = nullptr);

struct ShapingParams {
    int n_levels = 21;
    int subsample = 100;
    int horizon = 100;
    double w_thres = 0.15;
    double sigma = 0.5e-3;
    ProcessNoise noise;  // reused as Qd diagonal
};

/// Deterministic rollout of the subsample under constant u0 (bang-bang by
/// sign after a particle first exits the region), accumulating the
/// posterior-information recursion with F the one-step-map Jacobian at the
/// weighted-mean rollout state. Stops at the horizon or when the first
/// particle reaches the end of the engagement, whichever comes first.
InfoState rollout_fim(const std::vector<Particle>& subsample, const OwnState& own, double u0,
                      int horizon, double sigma, const Eigen::Matrix4d& qd,
                      const Eigen::Matrix4d& j0, double dt, const GameGeometry& g,
                      std::vector<double>* min_eigs = nullptr);

/// Systematic-resampled shaping subsample (fixed offset: no RNG consumed).
std::vector<Particle> shaping_subsample(const ParticleCloud& cloud, int count);

struct ShapingLogRow {
    double candidate;
    double det_sigma11;
    bool admissible;
    bool selected;
};

/// Candidate minimizing det of the (t_go, z) CRLB sub-block over the
/// admissible set; ties break toward the smallest |u|. Empty admissible set
/// yields no value (caller falls back to the base law).
std::optional<double> select_command(const ParticleCloud& cloud, const ShapingParams& params,
                                     const OwnState& own, double dt, const GameGeometry& g,
                                     std::vector<ShapingLogRow>* log = nullptr);

}  // namespace dgl
