#include "dgl/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dgl {

Hypothesis classify(const Particle& p, const GameGeometry& g) {
    const double zs = singular_boundary(std::max(p.state.t_go, 0.0), g);
    if (p.state.z > zs) return Hypothesis::H1;
    if (p.state.z < -zs) return Hypothesis::H4;
    return p.mode == 1 ? Hypothesis::H2 : Hypothesis::H3;
}

Eigen::Vector4d likelihoods(const ParticleCloud& cloud, const GameGeometry& g) {
    Eigen::Vector4d like = Eigen::Vector4d::Zero();
    for (const auto& p : cloud.particles) like(static_cast<int>(classify(p, g))) += p.weight;
    return like;
}

double chatter_ratio(double z, double z_star, double k_frac) {
    if (z_star <= 0.0) return z > 0.0 ? 1.0 : (z < 0.0 ? -1.0 : 0.0);
    return std::clamp(z / (k_frac * z_star), -1.0, 1.0);
}

bool decidable(Hypothesis h, const Eigen::Vector4d& likelihood) {
    if (h == Hypothesis::H1 || h == Hypothesis::H4) return true;
    return likelihood(static_cast<int>(h)) > 0.0;
}

namespace {

// Per-particle quantities reused across the cost double sums.
struct CostTerms {
    double w = 0.0;       // raw weight
    double z = 0.0;
    double coeff_u = 0.0;  // tau_m^2 [Y(theta) - Y(eta)], multiplies -u_m
    double drift_t = 0.0;  // a_T^max tau_t^2 [Y(theta/eps) - Y(eta/eps)]
    double zs_adv = 0.0;   // boundary at the advanced time
};

CostTerms make_terms(const Particle& p, double tau_max, const GameGeometry& g) {
    CostTerms c;
    c.w = p.weight;
    c.z = p.state.z;
    const double t_go = std::max(p.state.t_go, 0.0);
    const double tau = std::min(tau_max, t_go);
    const double tm = g.pursuer.tau;
    const double tt = g.evader.tau;
    c.coeff_u = tm * tm * (upsilon(t_go / tm) - upsilon((t_go - tau) / tm));
    c.drift_t = g.evader.a_max * tt * tt * (upsilon(t_go / tt) - upsilon((t_go - tau) / tt));
    c.zs_adv = singular_boundary(t_go - tau, g);
    return c;
}

// Excess of the advanced ZEM over the advanced boundary under pursuer command
// u and the worst-case target command (the game-value cost reading).
inline double worst_excess(const CostTerms& c, double u) {
    const double z0 = c.z - u * c.coeff_u;
    return std::max(0.0, std::abs(z0) + c.drift_t - c.zs_adv);
}

}  // namespace

double cost_correct(const ParticleCloud& cloud, Hypothesis j, const GameGeometry& g) {
    double mass = 0.0, acc = 0.0;
    for (const auto& p : cloud.particles) {
        if (classify(p, g) != j) continue;
        mass += p.weight;
        const double zs = singular_boundary(std::max(p.state.t_go, 0.0), g);
        acc += p.weight * std::max(0.0, std::abs(p.state.z) - zs);
    }
    if (mass <= 0.0) throw std::logic_error("cost_correct: zero-likelihood hypothesis");
    return acc / mass;
}

double cost_wrong(const ParticleCloud& cloud, Hypothesis i, Hypothesis j, double tau_max,
                  double k_frac, const GameGeometry& g) {
    if (i == j) throw std::logic_error("cost_wrong: i == j");

    // Commands implied by deciding hypothesis i.
    std::vector<double> cmd, cmd_w;
    if (i == Hypothesis::H1) {
        cmd = {g.pursuer.a_max};
        cmd_w = {1.0};
    } else if (i == Hypothesis::H4) {
        cmd = {-g.pursuer.a_max};
        cmd_w = {1.0};
    } else {
        double mass_i = 0.0;
        for (const auto& p : cloud.particles) {
            if (classify(p, g) != i) continue;
            const double zs = singular_boundary(std::max(p.state.t_go, 0.0), g);
            cmd.push_back(g.pursuer.a_max * chatter_ratio(p.state.z, zs, k_frac));
            cmd_w.push_back(p.weight);
            mass_i += p.weight;
        }
        if (cmd.empty()) {
            cmd = {0.0};
            cmd_w = {1.0};
        } else {
            for (auto& w : cmd_w) w /= mass_i;
        }
    }

    double mass_j = 0.0, acc = 0.0;
    for (const auto& p : cloud.particles) {
        if (classify(p, g) != j) continue;
        const CostTerms c = make_terms(p, tau_max, g);
        mass_j += p.weight;
        double inner = 0.0;
        for (std::size_t s = 0; s < cmd.size(); ++s) inner += cmd_w[s] * worst_excess(c, cmd[s]);
        acc += p.weight * inner;
    }
    if (mass_j <= 0.0) throw std::logic_error("cost_wrong: zero-likelihood hypothesis j");
    return acc / mass_j;
}

Eigen::Vector4d priors(const ParticleCloud& prev, double u_m_prev, const OwnState& own_prev,
                       const Eigen::Matrix2d& tpm, double dt, const GameGeometry& g) {
    const auto mp = prev.mode_probs();
    const double p_sw = tpm(0, 1) * mp[0] + tpm(1, 0) * mp[1];
    const double p_nsw = tpm(0, 0) * mp[0] + tpm(1, 1) * mp[1];

    Eigen::Vector4d mass_sw = Eigen::Vector4d::Zero();
    Eigen::Vector4d mass_nsw = Eigen::Vector4d::Zero();
    for (const auto& p : prev.particles) {
        for (int flip = 0; flip < 2; ++flip) {
            Particle q = p;
            if (flip) q.mode = q.mode == 1 ? 2 : 1;
            const double u_t = evader_command(q.mode, g);
            q.state = propagate_game_state(q.state, own_prev, u_m_prev, u_t, dt, g).state;
            (flip ? mass_sw : mass_nsw)(static_cast<int>(classify(q, g))) += q.weight;
        }
    }
    return p_sw * mass_sw + p_nsw * mass_nsw;
}

DecisionReport decide(const DecisionInputs& in) {
    if (!in.now || !in.prev || !in.geom) throw std::invalid_argument("decide: null inputs");
    const GameGeometry& g = *in.geom;

    DecisionReport rep;
    rep.likelihood = likelihoods(*in.now, g);

    rep.prior = priors(*in.prev, in.u_m_prev, in.own_prev, in.tpm, in.dt, g);
    for (int j = 0; j < 4; ++j)
        if (rep.likelihood(j) <= 0.0) rep.prior(j) = 0.0;

    for (int j = 0; j < 4; ++j) {
        if (rep.likelihood(j) <= 0.0) continue;  // cost column stays zero
        const auto hj = static_cast<Hypothesis>(j);
        rep.cost(j, j) = cost_correct(*in.now, hj, g);
        for (int i = 0; i < 4; ++i) {
            if (i == j) continue;
            rep.cost(i, j) =
                cost_wrong(*in.now, static_cast<Hypothesis>(i), hj, in.tau_max, in.k_frac, g);
        }
    }

    for (int i = 0; i < 4; ++i) {
        double risk = 0.0;
        for (int j = 0; j < 4; ++j) {
            if (j == i || rep.likelihood(j) <= 0.0) continue;
            risk += rep.prior(j) * rep.likelihood(j) * (rep.cost(i, j) - rep.cost(j, j));
        }
        rep.risk(i) = risk;
    }

    static constexpr Hypothesis kPreference[4] = {Hypothesis::H2, Hypothesis::H3, Hypothesis::H1,
                                                  Hypothesis::H4};
    double min_risk = std::numeric_limits<double>::infinity();
    bool all_small = true;
    for (int i = 0; i < 4; ++i) {
        if (!decidable(static_cast<Hypothesis>(i), rep.likelihood)) continue;
        min_risk = std::min(min_risk, rep.risk(i));
        if (rep.risk(i) >= in.eps_risk) all_small = false;
    }
    if (all_small) {
        rep.ambiguous = true;
        return rep;
    }
    for (Hypothesis h : kPreference) {
        if (!decidable(h, rep.likelihood)) continue;
        if (rep.risk(static_cast<int>(h)) <= min_risk + in.eps_risk) {
            rep.chosen = h;
            break;
        }
    }
    return rep;
}

}  // namespace dgl
