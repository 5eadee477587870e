#pragma once

#include <Eigen/Dense>

#include "dgl/game_dynamics.hpp"
#include "dgl/immpf.hpp"

namespace dgl {

enum class Hypothesis { H1 = 0, H2 = 1, H3 = 2, H4 = 3 };

inline const char* to_string(Hypothesis h) {
    switch (h) {
        case Hypothesis::H1: return "H1";
        case Hypothesis::H2: return "H2";
        case Hypothesis::H3: return "H3";
        case Hypothesis::H4: return "H4";
    }
    return "?";
}

/// H1 above the singular region, H4 below, H2/H3 inside split by mode.
/// Boundary membership is closed: |z| = z* counts as inside.
Hypothesis classify(const Particle& p, const GameGeometry& g);

/// Hypothesis likelihoods: summed weights of the particles in each region.
Eigen::Vector4d likelihoods(const ParticleCloud& cloud, const GameGeometry& g);

/// Cost of a correct decision: weighted mean excess of |z| over the boundary
/// at the current time. Zero for the interior hypotheses by construction.
double cost_correct(const ParticleCloud& cloud, Hypothesis j, const GameGeometry& g);

/// Cost of deciding i while j is true: H_j's particles advanced by
/// min(tau_max, t_go) under the commands hypothesis i implies (per-particle
/// saturated linear commands for interior hypotheses, the canonical bang for
/// the outer ones, 0 for an empty interior set) against the worst-case target
/// command, measured as excess over the advanced boundary.
double cost_wrong(const ParticleCloud& cloud, Hypothesis i, Hypothesis j, double tau_max,
                  double k_frac, const GameGeometry& g);

/// Hypothesis priors by total probability over the switch/no-switch events:
/// the previous cloud is advanced one interval with modes flipped and
/// unflipped, classified, and mixed with the TPM-derived switch probability.
Eigen::Vector4d priors(const ParticleCloud& prev, double u_m_prev, const OwnState& own_prev,
                       const Eigen::Matrix2d& tpm, double dt, const GameGeometry& g);

struct DecisionInputs {
    const ParticleCloud* now = nullptr;
    const ParticleCloud* prev = nullptr;
    double u_m_prev = 0.0;
    OwnState own_prev{0.0, 0.0};
    Eigen::Matrix2d tpm = Eigen::Matrix2d::Identity();
    double dt = 0.01;
    double tau_max = 0.16;
    double k_frac = 0.7;
    double eps_risk = 1e-6;
    const GameGeometry* geom = nullptr;
};

struct DecisionReport {
    Eigen::Vector4d likelihood = Eigen::Vector4d::Zero();
    Eigen::Vector4d prior = Eigen::Vector4d::Zero();
    Eigen::Matrix4d cost = Eigen::Matrix4d::Zero();  // cost(i, j)
    Eigen::Vector4d risk = Eigen::Vector4d::Zero();
    bool ambiguous = false;
    Hypothesis chosen = Hypothesis::H1;  // valid when !ambiguous
    bool fast_path = false;
};

/// The full decision criterion: likelihoods, priors, cost matrix, risks,
/// argmin over the decidable hypotheses (interior ones need nonzero
/// likelihood). All decidable risks under eps_risk means no unique optimum.
/// Ties are broken preferring H2, H3, H1, H4.
DecisionReport decide(const DecisionInputs& in);

/// Saturated DGL1-style linear ratio z/(k z*), guarded at z* = 0.
double chatter_ratio(double z, double z_star, double k_frac);

/// True when hypothesis h can be acted on given the likelihood vector.
bool decidable(Hypothesis h, const Eigen::Vector4d& likelihood);

}  // namespace dgl
