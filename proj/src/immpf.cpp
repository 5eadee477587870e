#include "dgl/immpf.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dgl {

std::array<double, 2> ParticleCloud::mode_probs() const {
    std::array<double, 2> p{0.0, 0.0};
    for (const auto& q : particles) p[q.mode == 1 ? 0 : 1] += q.weight;
    return p;
}

double ParticleCloud::weight_sum() const {
    double s = 0.0;
    for (const auto& q : particles) s += q.weight;
    return s;
}

void ParticleCloud::normalize() {
    const double s = weight_sum();
    if (s <= 0.0) throw std::runtime_error("ParticleCloud::normalize: nonpositive weight sum");
    for (auto& q : particles) q.weight /= s;
}

Eigen::Matrix2d tpm_at(double t, const TransitionModel& m) {
    if (t < 0.0) throw std::domain_error("tpm_at: negative time");
    double pi12 = m.pi12_quiet;
    if (t > m.t_s) {
        const double norm = m.c12 * m.beta / (2.0 * m.alpha * std::tgamma(1.0 / m.beta));
        pi12 = norm * std::exp(-std::pow(std::abs(t - m.mu) / m.alpha, m.beta));
    }
    if (!(pi12 >= 0.0 && pi12 <= 1.0) || !(m.pi21 >= 0.0 && m.pi21 <= 1.0))
        throw std::invalid_argument("tpm_at: transition probability outside [0,1]");
    Eigen::Matrix2d tpm;
    tpm << 1.0 - pi12, pi12, m.pi21, 1.0 - m.pi21;
    return tpm;
}

ParticleCloud immpf_initialize(const RadarSnapshot& snap, int n_per_mode, RngStream& rng,
                               const GameGeometry& g) {
    if (n_per_mode < 1) throw std::invalid_argument("immpf_initialize: n_per_mode < 1");
    Eigen::LLT<Eigen::Matrix4d> llt(snap.cov);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("immpf_initialize: covariance not positive definite");
    const Eigen::Matrix4d chol = llt.matrixL();

    ParticleCloud cloud;
    cloud.per_mode = n_per_mode;
    cloud.particles.reserve(2 * static_cast<std::size_t>(n_per_mode));
    const double w = 1.0 / (2.0 * n_per_mode);
    for (int mode = 1; mode <= 2; ++mode) {
        for (int i = 0; i < n_per_mode; ++i) {
            Eigen::Vector4d xi;
            for (int k = 0; k < 4; ++k) xi(k) = rng.normal();
            const Eigen::Vector4d sample = snap.mean + chol * xi;
            cloud.particles.push_back({radar_to_game(snap, sample, g), mode, w});
        }
    }
    return cloud;
}

std::vector<int> systematic_resample(const std::vector<double>& weights, int n, double u0) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (total <= 0.0) throw std::runtime_error("systematic_resample: nonpositive total weight");
    std::vector<int> idx(static_cast<std::size_t>(n));
    const double step = total / n;
    double pointer = u0 * step;
    double cum = weights.empty() ? 0.0 : weights[0];
    std::size_t j = 0;
    for (int i = 0; i < n; ++i) {
        while (pointer > cum && j + 1 < weights.size()) cum += weights[++j];
        idx[static_cast<std::size_t>(i)] = static_cast<int>(j);
        pointer += step;
    }
    return idx;
}

CycleResult immpf_cycle(ParticleCloud& cloud, double u_m, const OwnState& own_prev,
                        const Measurement& meas, const Eigen::Matrix2d& tpm,
                        const ProcessNoise& noise, double sigma, double dt, RngStream& rng,
                        const GameGeometry& g) {
    const int s_per_mode = cloud.per_mode;
    const std::size_t n_old = cloud.particles.size();
    if (s_per_mode < 1 || n_old == 0) throw std::runtime_error("immpf_cycle: empty cloud");

    // Interaction + resampling: for each destination mode, draw from the whole
    // cloud with weights pi(mode_i -> m') * w_i; the drawn set carries the
    // predicted mode probability split equally.
    std::vector<Particle> next;
    next.reserve(2 * static_cast<std::size_t>(s_per_mode));
    std::vector<double> q(n_old);
    for (int mprime = 1; mprime <= 2; ++mprime) {
        double mode_mass = 0.0;
        for (std::size_t i = 0; i < n_old; ++i) {
            const int mi = cloud.particles[i].mode == 1 ? 0 : 1;
            q[i] = tpm(mi, mprime - 1) * cloud.particles[i].weight;
            mode_mass += q[i];
        }
        const auto idx = systematic_resample(q, s_per_mode, rng.uniform());
        const double w = mode_mass / s_per_mode;
        for (int i : idx) {
            Particle p = cloud.particles[static_cast<std::size_t>(i)];
            p.mode = mprime;
            p.weight = w;
            next.push_back(p);
        }
    }
    cloud.particles = std::move(next);

    // Prediction: nonlinear propagation with the known pursuer command, then
    // additive process noise.
    for (auto& p : cloud.particles) {
        const double u_t = evader_command(p.mode, g);
        p.state = propagate_game_state(p.state, own_prev, u_m, u_t, dt, g).state;
        p.state.t_go += noise.t_go * rng.normal();
        p.state.z += noise.z * rng.normal();
        p.state.lambda += noise.lambda * rng.normal();
        p.state.gamma_t += noise.gamma_t * rng.normal();
    }
    cloud.t = meas.t;

    // Filtering: Gaussian bearing likelihood against the propagated own channel.
    const OwnState own_now = propagate_own(own_prev, u_m, dt, g.pursuer);
    CycleResult result;
    std::vector<double> prior(cloud.particles.size());
    double total = 0.0;
    for (std::size_t i = 0; i < cloud.particles.size(); ++i) {
        prior[i] = cloud.particles[i].weight;
        double like = 1.0;
        if (std::isfinite(sigma) && sigma > 0.0) {
            const double r = meas.y - (own_now.gamma_m - cloud.particles[i].state.lambda);
            like = std::max(std::exp(-0.5 * (r / sigma) * (r / sigma)), 1e-300);
        }
        cloud.particles[i].weight *= like;
        total += cloud.particles[i].weight;
    }
    if (!(total > 1e-290)) {
        for (std::size_t i = 0; i < cloud.particles.size(); ++i)
            cloud.particles[i].weight = prior[i];
        result.degenerate = true;
    }
    cloud.normalize();
    return result;
}

CloudEstimate estimate(const ParticleCloud& cloud) {
    CloudEstimate e{};
    e.mean = {0.0, 0.0, 0.0, 0.0};
    e.mode_probs = {0.0, 0.0};
    for (const auto& p : cloud.particles) {
        e.mean.t_go += p.weight * p.state.t_go;
        e.mean.z += p.weight * p.state.z;
        e.mean.lambda += p.weight * p.state.lambda;
        e.mean.gamma_t += p.weight * p.state.gamma_t;
        e.mode_probs[p.mode == 1 ? 0 : 1] += p.weight;
    }
    return e;
}

Eigen::Matrix2d cov_tgo_z(const ParticleCloud& cloud) {
    const CloudEstimate e = estimate(cloud);
    Eigen::Matrix2d c = Eigen::Matrix2d::Zero();
    for (const auto& p : cloud.particles) {
        const double dt = p.state.t_go - e.mean.t_go;
        const double dz = p.state.z - e.mean.z;
        c(0, 0) += p.weight * dt * dt;
        c(0, 1) += p.weight * dt * dz;
        c(1, 1) += p.weight * dz * dz;
    }
    c(1, 0) = c(0, 1);
    return c;
}

Eigen::Matrix4d cloud_covariance(const ParticleCloud& cloud) {
    const CloudEstimate e = estimate(cloud);
    const Eigen::Vector4d mean(e.mean.t_go, e.mean.z, e.mean.lambda, e.mean.gamma_t);
    Eigen::Matrix4d c = Eigen::Matrix4d::Zero();
    for (const auto& p : cloud.particles) {
        const Eigen::Vector4d x(p.state.t_go, p.state.z, p.state.lambda, p.state.gamma_t);
        const Eigen::Vector4d d = x - mean;
        c += p.weight * d * d.transpose();
    }
    return c;
}

}  // namespace dgl
