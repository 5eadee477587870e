#pragma once

#include <optional>
#include <utility>

namespace dgl {

constexpr double kStandardGravity = 9.80665;  // m/s^2

/// Bounded-acceleration player with strictly proper first-order dynamics.
struct PlayerParams {
    double a_max;  // lateral acceleration bound [m/s^2]
    double tau;    // actuator time constant [s]
    double v;      // speed [m/s], constant
};

struct GameGeometry {
    PlayerParams pursuer;
    PlayerParams evader;

    double mu() const { return pursuer.a_max / evader.a_max; }   // maneuverability ratio
    double eps() const { return evader.tau / pursuer.tau; }      // time-constant ratio
};

/// Game-space state: the coordinates estimation and decision work in.
struct GameState {
    double t_go;     // time-to-go [s]
    double z;        // zero-effort miss [m]
    double lambda;   // LOS angle [rad]
    double gamma_t;  // target path angle [rad]
};

// First-order-lag response kernels. psi(x) = e^-x + x - 1,
// upsilon(x) = x^2/2 - e^-x - x + 1 = x^2/2 - psi(x). Both >= 0 and
// nondecreasing for x >= 0; negative arguments are a domain error.
double psi(double theta);
double upsilon(double theta);
double psi_deriv(double theta);  // 1 - e^-theta

/// Half-width of the singular region at a given time-to-go.
double singular_boundary(double t_go, const GameGeometry& g);

/// ZEM from physical quantities: Z_PN + Z_acc.
double zem_from_physical(double t_go, double lambda, double v_lambda, double a_m_normal,
                         double a_t_normal, const GameGeometry& g);

/// LOS-normal acceleration components (a_m*cos(gamma_m - lambda), a_t*cos(gamma_t + lambda)).
std::pair<double, double> normal_accelerations(double a_m, double gamma_m, double a_t,
                                               double gamma_t, double lambda);

/// -rho/v_rho; empty when closing has ended (v_rho >= 0).
std::optional<double> t_go_estimate(double rho, double v_rho);

/// Inverse of the game-space transform: recovers (rho, a_t) from a game state
/// plus the physical quantities the interceptor knows.
struct PhysicalRecovery {
    double rho;
    double a_t;
};
PhysicalRecovery physical_from_game(const GameState& s, double v_rho, double v_lambda,
                                    double a_m_normal, const GameGeometry& g);

/// Closed-form ZEM advance by tau under constant commands (linear evolution
/// equation integrated exactly through the upsilon kernels).
double zem_propagate(double z, double t_go, double tau, double u_m, double u_t,
                     const GameGeometry& g);

/// Linear ZEM evolution rate, dZ/dt = -tau_m*psi(theta)*u_m + tau_t*psi(theta/eps)*u_t.
double zem_rate_linear(double t_go, double u_m, double u_t, const GameGeometry& g);

}  // namespace dgl
