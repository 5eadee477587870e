#include "dgl/game_dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace dgl {

namespace {
constexpr double kClosingFloor = -1e-3;  // v_rho above this counts as closing ended
}

double recover_target_accel(const GameState& x, const OwnState& own, const GameGeometry& g) {
    const double tm = g.pursuer.tau;
    const double tt = g.evader.tau;
    const double delta_m = own.gamma_m - x.lambda;
    const double delta_t = x.gamma_t + x.lambda;
    const double v_lambda = -g.pursuer.v * std::sin(delta_m) + g.evader.v * std::sin(delta_t);
    const double a_mn = own.a_m * std::cos(delta_m);
    const double denom = std::cos(delta_t) * tt * tt * psi(x.t_go / tt);
    if (std::abs(denom) < 1e-12) return 0.0;
    const double numer =
        x.z - x.t_go * v_lambda * std::cos(x.lambda) + a_mn * tm * tm * psi(x.t_go / tm);
    const double a_t = numer / denom;
    return std::clamp(a_t, -g.evader.a_max, g.evader.a_max);
}

GameDerivative game_state_rate(const GameState& x, const OwnState& own, double u_m, double u_t,
                               const GameGeometry& g) {
    const double vm = g.pursuer.v;
    const double vt = g.evader.v;
    const double tm = g.pursuer.tau;
    const double tt = g.evader.tau;

    const double delta_m = own.gamma_m - x.lambda;
    const double delta_t = x.gamma_t + x.lambda;
    const double cdm = std::cos(delta_m), sdm = std::sin(delta_m);
    const double cdt = std::cos(delta_t), sdt = std::sin(delta_t);

    const double v_rho = -(vm * cdm + vt * cdt);
    const double v_lam = -vm * sdm + vt * sdt;

    if (x.t_go <= 0.0 || v_rho >= kClosingFloor) return {0.0, 0.0, 0.0, 0.0, 0.0, 0.0};

    const double rho = -v_rho * x.t_go;
    const double a_t = recover_target_accel(x, own, g);
    const double a_mn = own.a_m * cdm;
    const double a_tn = a_t * cdt;

    const double lam_dot = v_lam / rho;
    const double gamma_m_dot = own.a_m / vm;
    const double gamma_t_dot = a_t / vt;
    const double a_m_dot = (u_m - own.a_m) / tm;
    const double a_t_dot = (u_t - a_t) / tt;
    const double dm_dot = gamma_m_dot - lam_dot;
    const double dt_dot = gamma_t_dot + lam_dot;
    const double v_lam_dot = -vm * cdm * dm_dot + vt * cdt * dt_dot;

    const double t_go_dot =
        -1.0 - (own.a_m * sdm + a_t * sdt) * x.t_go / v_rho + (v_lam / v_rho) * (v_lam / v_rho);

    const double cl = std::cos(x.lambda), sl = std::sin(x.lambda);
    const double z_pn_dot =
        t_go_dot * v_lam * cl + x.t_go * v_lam_dot * cl - x.t_go * v_lam * sl * lam_dot;

    const double psi_m = psi(x.t_go / tm);
    const double psi_t = psi(x.t_go / tt);
    const double a_mn_dot = a_m_dot * cdm - own.a_m * sdm * dm_dot;
    const double a_tn_dot = a_t_dot * cdt - a_t * sdt * dt_dot;
    const double z_acc_dot = -(a_mn_dot * tm * tm * psi_m +
                               a_mn * tm * psi_deriv(x.t_go / tm) * t_go_dot) +
                             a_tn_dot * tt * tt * psi_t +
                             a_tn * tt * psi_deriv(x.t_go / tt) * t_go_dot;

    return {t_go_dot, z_pn_dot + z_acc_dot, lam_dot, gamma_t_dot, gamma_m_dot, a_m_dot};
}

namespace {

struct Joint {
    GameState x;
    OwnState own;
};

Joint axpy(const Joint& base, const GameDerivative& d, double h) {
    Joint r;
    r.x.t_go = base.x.t_go + h * d.t_go_dot;
    r.x.z = base.x.z + h * d.z_dot;
    r.x.lambda = base.x.lambda + h * d.lambda_dot;
    r.x.gamma_t = base.x.gamma_t + h * d.gamma_t_dot;
    r.own.gamma_m = base.own.gamma_m + h * d.gamma_m_dot;
    r.own.a_m = base.own.a_m + h * d.a_m_dot;
    return r;
}

}  // namespace

OwnState propagate_own(const OwnState& own, double u_m, double dt, const PlayerParams& pursuer) {
    const auto rate = [&](const OwnState& s) {
        return OwnState{s.a_m / pursuer.v, (u_m - s.a_m) / pursuer.tau};
    };
    const OwnState k1 = rate(own);
    const OwnState k2 = rate({own.gamma_m + 0.5 * dt * k1.gamma_m, own.a_m + 0.5 * dt * k1.a_m});
    const OwnState k3 = rate({own.gamma_m + 0.5 * dt * k2.gamma_m, own.a_m + 0.5 * dt * k2.a_m});
    const OwnState k4 = rate({own.gamma_m + dt * k3.gamma_m, own.a_m + dt * k3.a_m});
    const double h6 = dt / 6.0;
    return {own.gamma_m + h6 * (k1.gamma_m + 2 * k2.gamma_m + 2 * k3.gamma_m + k4.gamma_m),
            own.a_m + h6 * (k1.a_m + 2 * k2.a_m + 2 * k3.a_m + k4.a_m)};
}

GameStep propagate_game_state(const GameState& x, const OwnState& own, double u_m, double u_t,
                              double dt, const GameGeometry& g) {
    const Joint y0{x, own};
    const GameDerivative k1 = game_state_rate(y0.x, y0.own, u_m, u_t, g);
    const Joint y1 = axpy(y0, k1, 0.5 * dt);
    const GameDerivative k2 = game_state_rate(y1.x, y1.own, u_m, u_t, g);
    const Joint y2 = axpy(y0, k2, 0.5 * dt);
    const GameDerivative k3 = game_state_rate(y2.x, y2.own, u_m, u_t, g);
    const Joint y3 = axpy(y0, k3, dt);
    const GameDerivative k4 = game_state_rate(y3.x, y3.own, u_m, u_t, g);

    const double h6 = dt / 6.0;
    GameStep out;
    out.state.t_go = x.t_go + h6 * (k1.t_go_dot + 2 * k2.t_go_dot + 2 * k3.t_go_dot + k4.t_go_dot);
    out.state.z = x.z + h6 * (k1.z_dot + 2 * k2.z_dot + 2 * k3.z_dot + k4.z_dot);
    out.state.lambda =
        x.lambda + h6 * (k1.lambda_dot + 2 * k2.lambda_dot + 2 * k3.lambda_dot + k4.lambda_dot);
    out.state.gamma_t = x.gamma_t + h6 * (k1.gamma_t_dot + 2 * k2.gamma_t_dot +
                                          2 * k3.gamma_t_dot + k4.gamma_t_dot);
    out.own.gamma_m = own.gamma_m + h6 * (k1.gamma_m_dot + 2 * k2.gamma_m_dot +
                                          2 * k3.gamma_m_dot + k4.gamma_m_dot);
    out.own.a_m = own.a_m + h6 * (k1.a_m_dot + 2 * k2.a_m_dot + 2 * k3.a_m_dot + k4.a_m_dot);
    return out;
}

}  // namespace dgl
