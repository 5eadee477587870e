#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "dgl/engagement.hpp"
#include "dgl/game_dynamics.hpp"
#include "dgl/rng.hpp"

namespace dgl {

struct Particle {
    GameState state;
    int mode;  // 1 or 2
    double weight;
};

struct ParticleCloud {
    std::vector<Particle> particles;
    double t = 0.0;
    int per_mode = 0;  // particles kept per mode after interaction

    std::array<double, 2> mode_probs() const;
    double weight_sum() const;
    void normalize();
};

// Non-homogeneous mode transition model: constant pi21, pi12 quiet until t_s
// then shaped as a generalized-Gaussian density bump around the expected
// evasion window.
struct TransitionModel {
    double pi21 = 1e-3;
    double pi12_quiet = 1e-3;
    double t_s = 1.9;
    double c12 = 0.16;
    double mu = 2.5;
    double beta = 6.0;
    double alpha = 0.45;
};

/// Row-stochastic TPM at time t; throws std::invalid_argument if the model
/// yields an entry outside [0, 1].
Eigen::Matrix2d tpm_at(double t, const TransitionModel& m);

/// Per-step additive process-noise standard deviations (game coordinates).
struct ProcessNoise {
    double t_go = 5e-3;
    double z = 1.0;
    double lambda = 2e-4;
    double gamma_t = 2e-3;
};

/// Draws n_per_mode samples per mode from the radar estimate's PDF and maps
/// them into game space; equal weights, equal mode split.
ParticleCloud immpf_initialize(const RadarSnapshot& snap, int n_per_mode, RngStream& rng,
                               const GameGeometry& g);

struct CycleResult {
    bool degenerate = false;  // all likelihoods hit the floor; update skipped
};

/// One filter cycle: combined interaction/resampling (systematic, per mode),
/// prediction through the nonlinear game-space dynamics with the known
/// interceptor command, then bearing-likelihood weighting.
CycleResult immpf_cycle(ParticleCloud& cloud, double u_m, const OwnState& own_prev,
                        const Measurement& meas, const Eigen::Matrix2d& tpm,
                        const ProcessNoise& noise, double sigma, double dt, RngStream& rng,
                        const GameGeometry& g);

struct CloudEstimate {
    GameState mean;
    std::array<double, 2> mode_probs;
};

CloudEstimate estimate(const ParticleCloud& cloud);

/// Weighted sample covariance of (t_go, z); consistency checks.
Eigen::Matrix2d cov_tgo_z(const ParticleCloud& cloud);

/// Full 4x4 weighted sample covariance (t_go, z, lambda, gamma_t).
Eigen::Matrix4d cloud_covariance(const ParticleCloud& cloud);

/// Systematic resampling: n index draws against the given weights with a
/// single uniform offset u0 in [0,1).
std::vector<int> systematic_resample(const std::vector<double>& weights, int n, double u0);

}  // namespace dgl
