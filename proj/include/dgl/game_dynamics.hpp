#pragma once

#include "dgl/game_math.hpp"

namespace dgl {

/// Interceptor's own lateral channel, known to it exactly.
struct OwnState {
    double gamma_m;  // path angle [rad]
    double a_m;      // achieved lateral acceleration [m/s^2]
};

struct GameDerivative {
    double t_go_dot;
    double z_dot;
    double lambda_dot;
    double gamma_t_dot;
    double gamma_m_dot;
    double a_m_dot;
};

// Full nonlinear game-space rate: chain-rule time derivative of
// (t_go, Z, lambda, gamma_t) through the polar-coordinate kinematics, with
// the target acceleration recovered from the ZEM (clamped to the evader
// bound) and the interceptor channel driven by the known command u_m.
// States past end-of-closing (v_rho >= 0 or t_go <= 0) are frozen.
GameDerivative game_state_rate(const GameState& x, const OwnState& own, double u_m, double u_t,
                               const GameGeometry& g);

struct GameStep {
    GameState state;
    OwnState own;
};

/// One RK4 step of the joint (game state, own channel) system under
/// zero-order-hold commands.
GameStep propagate_game_state(const GameState& x, const OwnState& own, double u_m, double u_t,
                              double dt, const GameGeometry& g);

/// RK4 step of the self-contained own channel alone.
OwnState propagate_own(const OwnState& own, double u_m, double dt, const PlayerParams& pursuer);

/// Target acceleration implied by a game state (transform inverse), clamped
/// to the evader's bound; 0 when the transform degenerates.
double recover_target_accel(const GameState& x, const OwnState& own, const GameGeometry& g);

}  // namespace dgl
