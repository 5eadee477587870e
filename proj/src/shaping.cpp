#include "dgl/shaping.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

namespace dgl {

AdmissibleSet admissible_commands(const ParticleCloud& cloud, int n_levels, double w_thres,
                                  double dt, const GameGeometry& g) {
    if (n_levels < 2) throw std::invalid_argument("admissible_commands: n_levels < 2");
    AdmissibleSet set;
    set.w_thres = w_thres;
    const double a = g.pursuer.a_max;
    for (int k = 0; k < n_levels; ++k) {
        const double u = -a + 2.0 * a * k / (n_levels - 1);
        double outside = 0.0;
        for (const auto& p : cloud.particles) {
            const double t_go = std::max(p.state.t_go, 0.0);
            const double tau = std::min(dt, t_go);
            const double u_t = evader_command(p.mode, g);
            const double z_next = zem_propagate(p.state.z, t_go, tau, u, u_t, g);
            if (std::abs(z_next) > singular_boundary(t_go - tau, g)) outside += p.weight;
        }
        if (outside <= w_thres) set.candidates.push_back(u);
    }
    return set;
}

Eigen::Matrix4d fim_step(const Eigen::Matrix4d& j, const Eigen::Matrix4d& f,
                         const Eigen::Matrix4d& qd, double sigma, bool* regularized) {
    Eigen::Matrix4d jsym = 0.5 * (j + j.transpose());
    Eigen::FullPivLU<Eigen::Matrix4d> lu(jsym);
    if (!lu.isInvertible()) {
        jsym += 1e-12 * std::max(jsym.trace(), 1.0) * Eigen::Matrix4d::Identity();
        lu.compute(jsym);
        if (regularized) *regularized = true;
    }
    const Eigen::Matrix4d pred = qd + f * lu.inverse() * f.transpose();
    Eigen::FullPivLU<Eigen::Matrix4d> lu2(pred);
    Eigen::Matrix4d jnext;
    if (!lu2.isInvertible()) {
        const Eigen::Matrix4d ridge =
            pred + 1e-12 * std::max(pred.trace(), 1.0) * Eigen::Matrix4d::Identity();
        jnext = ridge.inverse();
        if (regularized) *regularized = true;
    } else {
        jnext = lu2.inverse();
    }
    jnext(2, 2) += 1.0 / (sigma * sigma);
    return 0.5 * (jnext + jnext.transpose());
}

std::vector<Particle> shaping_subsample(const ParticleCloud& cloud, int count) {
    std::vector<double> w(cloud.particles.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = cloud.particles[i].weight;
    const auto idx = systematic_resample(w, count, 0.5);
    std::vector<Particle> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i : idx) {
        Particle p = cloud.particles[static_cast<std::size_t>(i)];
        p.weight = 1.0 / count;
        out.push_back(p);
    }
    return out;
}

namespace {

struct RolloutParticle {
    GameState state;
    OwnState own;
    int mode;
    double weight;
    bool crossed = false;
};

double rollout_command(const RolloutParticle& p, double u0, const GameGeometry& g) {
    if (!p.crossed) return u0;
    return p.state.z >= 0.0 ? g.pursuer.a_max : -g.pursuer.a_max;
}

void advance(RolloutParticle& p, double u_m, double u_t, double dt, const GameGeometry& g) {
    const GameStep s = propagate_game_state(p.state, p.own, u_m, u_t, dt, g);
    p.state = s.state;
    p.own = s.own;
    if (std::abs(p.state.z) > singular_boundary(std::max(p.state.t_go, 0.0), g)) p.crossed = true;
}

// Central-difference Jacobian of the one-step map at a state.
Eigen::Matrix4d step_jacobian(const RolloutParticle& p, double u_m, double u_t, double dt,
                              const GameGeometry& g) {
    static constexpr double kStep[4] = {1e-6, 1e-3, 1e-7, 1e-7};
    Eigen::Matrix4d f;
    for (int c = 0; c < 4; ++c) {
        GameState hi = p.state, lo = p.state;
        double* fields_hi[4] = {&hi.t_go, &hi.z, &hi.lambda, &hi.gamma_t};
        double* fields_lo[4] = {&lo.t_go, &lo.z, &lo.lambda, &lo.gamma_t};
        *fields_hi[c] += kStep[c];
        *fields_lo[c] -= kStep[c];
        const GameState sh = propagate_game_state(hi, p.own, u_m, u_t, dt, g).state;
        const GameState sl = propagate_game_state(lo, p.own, u_m, u_t, dt, g).state;
        const double inv = 1.0 / (2.0 * kStep[c]);
        f(0, c) = (sh.t_go - sl.t_go) * inv;
        f(1, c) = (sh.z - sl.z) * inv;
        f(2, c) = (sh.lambda - sl.lambda) * inv;
        f(3, c) = (sh.gamma_t - sl.gamma_t) * inv;
    }
    return f;
}

}  // namespace

InfoState rollout_fim(const std::vector<Particle>& subsample, const OwnState& own, double u0,
                      int horizon, double sigma, const Eigen::Matrix4d& qd,
                      const Eigen::Matrix4d& j0, double dt, const GameGeometry& g,
                      std::vector<double>* min_eigs) {
    InfoState info;
    info.fim = 0.5 * (j0 + j0.transpose());
    if (horizon < 0) throw std::invalid_argument("rollout_fim: negative horizon");

    std::vector<RolloutParticle> ps;
    ps.reserve(subsample.size());
    RolloutParticle mean{{0, 0, 0, 0}, own, 1, 1.0, false};
    double wsum = 0.0;
    double mode_cmd = 0.0;
    for (const auto& p : subsample) {
        RolloutParticle r{p.state, own, p.mode, p.weight, false};
        r.crossed = std::abs(p.state.z) > singular_boundary(std::max(p.state.t_go, 0.0), g);
        ps.push_back(r);
        mean.state.t_go += p.weight * p.state.t_go;
        mean.state.z += p.weight * p.state.z;
        mean.state.lambda += p.weight * p.state.lambda;
        mean.state.gamma_t += p.weight * p.state.gamma_t;
        mode_cmd += p.weight * evader_command(p.mode, g);
        wsum += p.weight;
    }
    if (wsum <= 0.0) throw std::invalid_argument("rollout_fim: empty subsample");
    mean.state.t_go /= wsum;
    mean.state.z /= wsum;
    mean.state.lambda /= wsum;
    mean.state.gamma_t /= wsum;
    mode_cmd /= wsum;
    mean.crossed =
        std::abs(mean.state.z) > singular_boundary(std::max(mean.state.t_go, 0.0), g);

    for (int h = 0; h < horizon; ++h) {
        double min_tgo = mean.state.t_go;
        for (const auto& p : ps) min_tgo = std::min(min_tgo, p.state.t_go);
        if (min_tgo <= dt) {
            info.stopped_by_engagement_end = true;
            break;
        }
        const double u_mean = rollout_command(mean, u0, g);
        const Eigen::Matrix4d f = step_jacobian(mean, u_mean, mode_cmd, dt, g);
        advance(mean, u_mean, mode_cmd, dt, g);
        for (auto& p : ps) advance(p, rollout_command(p, u0, g), evader_command(p.mode, g), dt, g);
        bool reg = false;
        info.fim = fim_step(info.fim, f, qd, sigma, &reg);
        info.regularized |= reg;
        ++info.steps;
        if (min_eigs) {
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(info.fim);
            min_eigs->push_back(es.eigenvalues().minCoeff());
        }
    }
    return info;
}

std::optional<double> select_command(const ParticleCloud& cloud, const ShapingParams& params,
                                     const OwnState& own, double dt, const GameGeometry& g,
                                     std::vector<ShapingLogRow>* log) {
    const AdmissibleSet adm =
        admissible_commands(cloud, params.n_levels, params.w_thres, dt, g);
    if (adm.candidates.empty()) return std::nullopt;

    const auto sub = shaping_subsample(cloud, params.subsample);

    Eigen::Matrix4d cov = cloud_covariance(cloud);
    cov += 1e-12 * std::max(cov.trace(), 1.0) * Eigen::Matrix4d::Identity();
    const Eigen::Matrix4d j0 = cov.inverse();

    Eigen::Matrix4d qd = Eigen::Matrix4d::Zero();
    qd(0, 0) = params.noise.t_go * params.noise.t_go;
    qd(1, 1) = params.noise.z * params.noise.z;
    qd(2, 2) = params.noise.lambda * params.noise.lambda;
    qd(3, 3) = params.noise.gamma_t * params.noise.gamma_t;

    double best_u = adm.candidates.front();
    double best_det = std::numeric_limits<double>::infinity();
    std::size_t best_row = 0;
    for (double u : adm.candidates) {
        const InfoState info =
            rollout_fim(sub, own, u, params.horizon, params.sigma, qd, j0, dt, g);
        const Eigen::Matrix4d sigma_full = info.fim.inverse();
        const double det11 =
            sigma_full(0, 0) * sigma_full(1, 1) - sigma_full(0, 1) * sigma_full(1, 0);
        if (log) log->push_back({u, det11, true, false});
        const bool better =
            det11 < best_det ||
            (det11 == best_det && std::abs(u) < std::abs(best_u));
        if (better) {
            best_det = det11;
            best_u = u;
            if (log) best_row = log->size() - 1;
        }
    }
    if (log && !log->empty()) (*log)[best_row].selected = true;
    return best_u;
}

}  // namespace dgl
