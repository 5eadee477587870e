#pragma once

#include <Eigen/Dense>

#include "dgl/bayes.hpp"
#include "dgl/immpf.hpp"

namespace dgl {

/// Extremal interior commands of the nonzero-weight particles in H2/H3,
/// a_max * (z / z*) clamped to the command bound; zeros for empty sets.
struct InteriorCommandBounds {
    double u_hi_2 = 0.0, u_lo_2 = 0.0;
    double u_hi_3 = 0.0, u_lo_3 = 0.0;
    bool h2_empty = true, h3_empty = true;
};

InteriorCommandBounds interior_bounds(const ParticleCloud& cloud, const GameGeometry& g);

/// Weight mass inside each of the four zero-risk regions for propagation
/// horizon tau (clamped per particle to its own t_go). The bounds parametrize
/// the interior-region inequalities.
Eigen::Vector4d region_mass(const ParticleCloud& cloud, double tau,
                            const InteriorCommandBounds& bounds, const GameGeometry& g);

enum class FastVerdict { Hyp, Ambiguous, NoShortcut };

struct FastDecision {
    FastVerdict verdict = FastVerdict::NoShortcut;
    Hypothesis hypothesis = Hypothesis::H1;  // valid when verdict == Hyp
    Eigen::Vector4d mass = Eigen::Vector4d::Zero();
};

/// Region-membership shortcut certifying a zero-risk hypothesis without the
/// cost matrix. Uses chattering-consistent command bounds (sat(ratio/k)) so
/// the certificate covers exactly the commands the cost propagation applies;
/// the certificate is per-particle and worst-case over target commands, so it
/// is sound with no premises on the cloud. All four masses at one => every
/// risk is zero => Ambiguous; otherwise the preferred decidable mass-one
/// region wins; none => NoShortcut.
FastDecision try_fast_decision(const ParticleCloud& cloud, double tau_max, double k_frac,
                               const GameGeometry& g);

}  // namespace dgl
