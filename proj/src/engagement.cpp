#include "dgl/engagement.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dgl {

int evader_mode_at(const EvaderPolicy& p, double t) {
    const int other = p.initial_mode == 1 ? 2 : 1;
    return t < p.switch_time ? p.initial_mode : other;
}

double evader_command(int mode, const GameGeometry& g) {
    return mode == 1 ? g.evader.a_max : -g.evader.a_max;
}

RelativeState derive_relative(const TruthState& s, const GameGeometry& g) {
    const double rx = s.x_t - s.x_m;
    const double ry = s.y_t - s.y_m;
    const double rho = std::hypot(rx, ry);
    if (rho < 1e-9) throw std::domain_error("derive_relative: coincident positions");
    const double lambda = std::atan2(ry, rx);
    const double delta_m = s.gamma_m - lambda;
    const double delta_t = s.gamma_t + lambda;
    const double v_rho = -(g.pursuer.v * std::cos(delta_m) + g.evader.v * std::cos(delta_t));
    const double v_lambda = -g.pursuer.v * std::sin(delta_m) + g.evader.v * std::sin(delta_t);
    return {rho, lambda, v_rho, v_lambda, delta_m, delta_t};
}

namespace {

struct TruthRates {
    double x_m, y_m, gamma_m, a_m;
    double x_t, y_t, gamma_t, a_t;
};

TruthRates truth_rate(const TruthState& s, double u_m, double u_t, const GameGeometry& g) {
    TruthRates d;
    d.x_m = g.pursuer.v * std::cos(s.gamma_m);
    d.y_m = g.pursuer.v * std::sin(s.gamma_m);
    d.gamma_m = s.a_m / g.pursuer.v;
    d.a_m = (u_m - s.a_m) / g.pursuer.tau;
    d.x_t = -g.evader.v * std::cos(s.gamma_t);
    d.y_t = g.evader.v * std::sin(s.gamma_t);
    d.gamma_t = s.a_t / g.evader.v;
    d.a_t = (u_t - s.a_t) / g.evader.tau;
    return d;
}

TruthState axpy(const TruthState& s, const TruthRates& d, double h) {
    TruthState r = s;
    r.x_m += h * d.x_m;
    r.y_m += h * d.y_m;
    r.gamma_m += h * d.gamma_m;
    r.a_m += h * d.a_m;
    r.x_t += h * d.x_t;
    r.y_t += h * d.y_t;
    r.gamma_t += h * d.gamma_t;
    r.a_t += h * d.a_t;
    return r;
}

TruthState rk4_truth(const TruthState& s, double u_m, double u_t, double dt,
                     const GameGeometry& g) {
    const TruthRates k1 = truth_rate(s, u_m, u_t, g);
    const TruthRates k2 = truth_rate(axpy(s, k1, 0.5 * dt), u_m, u_t, g);
    const TruthRates k3 = truth_rate(axpy(s, k2, 0.5 * dt), u_m, u_t, g);
    const TruthRates k4 = truth_rate(axpy(s, k3, dt), u_m, u_t, g);
    TruthState r = s;
    const double h6 = dt / 6.0;
    r.x_m += h6 * (k1.x_m + 2 * k2.x_m + 2 * k3.x_m + k4.x_m);
    r.y_m += h6 * (k1.y_m + 2 * k2.y_m + 2 * k3.y_m + k4.y_m);
    r.gamma_m += h6 * (k1.gamma_m + 2 * k2.gamma_m + 2 * k3.gamma_m + k4.gamma_m);
    r.a_m += h6 * (k1.a_m + 2 * k2.a_m + 2 * k3.a_m + k4.a_m);
    r.x_t += h6 * (k1.x_t + 2 * k2.x_t + 2 * k3.x_t + k4.x_t);
    r.y_t += h6 * (k1.y_t + 2 * k2.y_t + 2 * k3.y_t + k4.y_t);
    r.gamma_t += h6 * (k1.gamma_t + 2 * k2.gamma_t + 2 * k3.gamma_t + k4.gamma_t);
    r.a_t += h6 * (k1.a_t + 2 * k2.a_t + 2 * k3.a_t + k4.a_t);
    r.t += dt;
    return r;
}

}  // namespace

TruthState step_truth(const TruthState& s, double u_m, const EvaderPolicy& policy, double dt,
                      const GameGeometry& g) {
    if (dt <= 0.0) throw std::domain_error("step_truth: dt must be positive");
    TruthState cur = s;
    const double t_end = s.t + dt;
    // Split at the switch instant when it falls inside this step.
    if (policy.switch_time > cur.t && policy.switch_time < t_end) {
        const double u_t1 = evader_command(evader_mode_at(policy, cur.t), g);
        cur = rk4_truth(cur, u_m, u_t1, policy.switch_time - cur.t, g);
        cur.t = policy.switch_time;  // land exactly on the event
    }
    const double u_t2 = evader_command(evader_mode_at(policy, cur.t), g);
    if (t_end > cur.t) cur = rk4_truth(cur, u_m, u_t2, t_end - cur.t, g);
    cur.t = t_end;
    cur.mode = evader_mode_at(policy, cur.t);
    return cur;
}

Measurement measure(const TruthState& s, double sigma, RngStream& rng, const GameGeometry& g) {
    if (sigma < 0.0) throw std::domain_error("measure: negative sigma");
    const RelativeState rel = derive_relative(s, g);
    const double noise = sigma > 0.0 ? sigma * rng.normal() : 0.0;
    return {s.t, (s.gamma_m - rel.lambda) + noise};
}

RadarSnapshot make_radar_snapshot(const TruthState& s, const Eigen::Matrix4d& cov, double radar_x,
                                  double radar_y, RngStream& rng) {
    const double rx = s.x_t - radar_x;
    const double ry = s.y_t - radar_y;
    Eigen::Vector4d truth;
    truth << std::hypot(rx, ry), std::atan2(ry, rx), s.gamma_t, s.a_t;

    Eigen::LLT<Eigen::Matrix4d> llt(cov);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("make_radar_snapshot: covariance not positive definite");
    Eigen::Vector4d xi;
    for (int i = 0; i < 4; ++i) xi(i) = rng.normal();

    RadarSnapshot snap;
    snap.mean = truth + llt.matrixL() * xi;
    snap.cov = cov;
    snap.radar_x = radar_x;
    snap.radar_y = radar_y;
    snap.interceptor_x = s.x_m;
    snap.interceptor_y = s.y_m;
    snap.own_gamma_m = s.gamma_m;
    snap.own_a_m = s.a_m;
    return snap;
}

GameState radar_to_game(const RadarSnapshot& snap, const Eigen::Vector4d& sample,
                        const GameGeometry& g) {
    const double rho_r = sample(0);
    const double lambda_r = sample(1);
    const double gamma_t = sample(2);
    const double a_t = sample(3);

    const double dx = snap.radar_x - snap.interceptor_x;
    const double dy = snap.radar_y - snap.interceptor_y;
    const double relx = dx + rho_r * std::cos(lambda_r);
    const double rely = dy + rho_r * std::sin(lambda_r);
    const double rho = std::hypot(relx, rely);
    if (rho < 1e-9) throw std::domain_error("radar_to_game: degenerate geometry");
    const double lambda = std::atan2(rely, relx);

    const double delta_m = snap.own_gamma_m - lambda;
    const double delta_t = gamma_t + lambda;
    const double v_rho = -(g.pursuer.v * std::cos(delta_m) + g.evader.v * std::cos(delta_t));
    const double v_lambda = -g.pursuer.v * std::sin(delta_m) + g.evader.v * std::sin(delta_t);
    const auto t_go = t_go_estimate(rho, v_rho);
    if (!t_go) throw std::domain_error("radar_to_game: geometry is not closing");

    const auto [a_mn, a_tn] =
        normal_accelerations(snap.own_a_m, snap.own_gamma_m, a_t, gamma_t, lambda);
    const double z = zem_from_physical(*t_go, lambda, v_lambda, a_mn, a_tn, g);
    return {*t_go, z, lambda, gamma_t};
}

MissResult miss_distance(const std::vector<double>& t, const std::vector<double>& rho) {
    if (t.size() != rho.size() || rho.empty())
        throw std::invalid_argument("miss_distance: bad trajectory");
    const auto it = std::min_element(rho.begin(), rho.end());
    const std::size_t i = static_cast<std::size_t>(it - rho.begin());
    if (i == 0 || i + 1 == rho.size()) {
        // no bracketing triple: monotone or truncated run
        return {rho.back(), false};
    }
    // Parabola through rho^2 at the three bracketing samples.
    const double t0 = t[i - 1], t1 = t[i], t2 = t[i + 1];
    const double q0 = rho[i - 1] * rho[i - 1], q1 = rho[i] * rho[i], q2 = rho[i + 1] * rho[i + 1];
    const double d0 = (t1 - t0) * (t2 - t0);
    const double d1 = (t1 - t0) * (t2 - t1);
    const double d2 = (t2 - t0) * (t2 - t1);
    const double a = q0 / d0 - q1 / d1 + q2 / d2;
    if (a <= 0.0) return {rho[i], true};
    const double b = -q0 * (t1 + t2) / d0 + q1 * (t0 + t2) / d1 - q2 * (t0 + t1) / d2;
    double ts = -0.5 * b / a;
    ts = std::clamp(ts, t0, t2);
    const double c = q0 * t1 * t2 / d0 - q1 * t0 * t2 / d1 + q2 * t0 * t1 / d2;
    const double qmin = (a * ts + b) * ts + c;
    return {std::sqrt(std::max(0.0, qmin)), true};
}

}  // namespace dgl
