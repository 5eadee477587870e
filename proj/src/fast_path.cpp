#include "dgl/fast_path.hpp"

#include <algorithm>
#include <cmath>

namespace dgl {

namespace {

double interior_ratio(const Particle& p, const GameGeometry& g) {
    const double zs = singular_boundary(std::max(p.state.t_go, 0.0), g);
    if (zs <= 0.0) return 0.0;
    return std::clamp(p.state.z / zs, -1.0, 1.0);
}

}  // namespace

InteriorCommandBounds interior_bounds(const ParticleCloud& cloud, const GameGeometry& g) {
    InteriorCommandBounds b;
    double hi2 = -1.0, lo2 = 1.0, hi3 = -1.0, lo3 = 1.0;
    for (const auto& p : cloud.particles) {
        if (p.weight <= 0.0) continue;
        const Hypothesis h = classify(p, g);
        if (h != Hypothesis::H2 && h != Hypothesis::H3) continue;
        const double r = interior_ratio(p, g);
        if (h == Hypothesis::H2) {
            b.h2_empty = false;
            hi2 = std::max(hi2, r);
            lo2 = std::min(lo2, r);
        } else {
            b.h3_empty = false;
            hi3 = std::max(hi3, r);
            lo3 = std::min(lo3, r);
        }
    }
    const double a = g.pursuer.a_max;
    if (!b.h2_empty) {
        b.u_hi_2 = a * hi2;
        b.u_lo_2 = a * lo2;
    }
    if (!b.h3_empty) {
        b.u_hi_3 = a * hi3;
        b.u_lo_3 = a * lo3;
    }
    return b;
}

Eigen::Vector4d region_mass(const ParticleCloud& cloud, double tau,
                            const InteriorCommandBounds& bounds, const GameGeometry& g) {
    const double a = g.pursuer.a_max;
    const double tm = g.pursuer.tau;
    Eigen::Vector4d mass = Eigen::Vector4d::Zero();
    for (const auto& p : cloud.particles) {
        const double t_go = std::max(p.state.t_go, 0.0);
        const double tau_p = std::min(tau, t_go);
        const double theta = t_go / tm;
        const double eta = theta - tau_p / tm;
        const double bracket = tm * tm * (upsilon(eta) - upsilon(theta));  // <= 0
        const double d = singular_boundary(t_go, g);
        const double z = p.state.z;

        if (-z <= d + 2.0 * a * bracket) mass(0) += p.weight;
        if (z <= d + (a - bounds.u_lo_2) * bracket && -z <= d + (a + bounds.u_hi_2) * bracket)
            mass(1) += p.weight;
        if (z <= d + (a - bounds.u_lo_3) * bracket && -z <= d + (a + bounds.u_hi_3) * bracket)
            mass(2) += p.weight;
        if (z <= d + 2.0 * a * bracket) mass(3) += p.weight;
    }
    return mass;
}

FastDecision try_fast_decision(const ParticleCloud& cloud, double tau_max, double k_frac,
                               const GameGeometry& g) {
    FastDecision fd;
    const InteriorCommandBounds raw = interior_bounds(cloud, g);
    const Eigen::Vector4d like = likelihoods(cloud, g);

    // Amplify the bounds through the chattering logic so the tested command
    // hull matches the cost propagation's commands.
    const double a = g.pursuer.a_max;
    const auto amplify = [&](double u) {
        return a * std::clamp(u / (a * k_frac), -1.0, 1.0);
    };
    InteriorCommandBounds amp = raw;
    if (!raw.h2_empty) {
        amp.u_hi_2 = amplify(raw.u_hi_2);
        amp.u_lo_2 = amplify(raw.u_lo_2);
    }
    if (!raw.h3_empty) {
        amp.u_hi_3 = amplify(raw.u_hi_3);
        amp.u_lo_3 = amplify(raw.u_lo_3);
    }

    fd.mass = region_mass(cloud, tau_max, amp, g);
    const auto certified = [&](int i) { return fd.mass(i) >= 1.0 - 1e-12; };

    if (certified(0) && certified(1) && certified(2) && certified(3)) {
        fd.verdict = FastVerdict::Ambiguous;
        return fd;
    }
    static constexpr Hypothesis kPreference[4] = {Hypothesis::H2, Hypothesis::H3, Hypothesis::H1,
                                                  Hypothesis::H4};
    for (Hypothesis h : kPreference) {
        const int i = static_cast<int>(h);
        if (certified(i) && decidable(h, like)) {
            fd.verdict = FastVerdict::Hyp;
            fd.hypothesis = h;
            return fd;
        }
    }
    return fd;
}

}  // namespace dgl
