#include <doctest.h>

#include <cmath>

#include "dgl/engagement.hpp"
#include "dgl/game_dynamics.hpp"
#include "dgl/runner.hpp"
#include "test_support.hpp"

using namespace dgl;
using dgl::test::close_rel;
using dgl::test::nominal_geometry;

TEST_CASE("own channel step response is the first-order lag") {
    const GameGeometry g = nominal_geometry();
    OwnState own{0.3, 0.0};
    const double u = 200.0;
    const double dt = 1e-3;
    for (int i = 0; i < 300; ++i) own = propagate_own(own, u, dt, g.pursuer);
    const double t = 0.3;
    CHECK(own.a_m == doctest::Approx(u * (1.0 - std::exp(-t / g.pursuer.tau))).epsilon(1e-6));
}

TEST_CASE("game-state rate freezes degenerate states") {
    const GameGeometry g = nominal_geometry();
    const GameDerivative d = game_state_rate({-0.1, 5.0, 0.2, 0.1}, {0.2, 0.0}, 0.0, 0.0, g);
    CHECK(d.t_go_dot == 0.0);
    CHECK(d.z_dot == 0.0);
}

TEST_CASE("recovered target acceleration is clamped and exact on consistent states") {
    const GameGeometry g = nominal_geometry();
    // build a consistent game state from chosen physical quantities
    const double gamma_m = 1.4, a_m = 50.0, gamma_t = -1.2, a_t = 130.0, lambda = 1.5;
    const double t_go = 2.2;
    const auto [a_mn, a_tn] = normal_accelerations(a_m, gamma_m, a_t, gamma_t, lambda);
    const double v_lam =
        -g.pursuer.v * std::sin(gamma_m - lambda) + g.evader.v * std::sin(gamma_t + lambda);
    const double z = zem_from_physical(t_go, lambda, v_lam, a_mn, a_tn, g);
    const double rec = recover_target_accel({t_go, z, lambda, gamma_t}, {gamma_m, a_m}, g);
    CHECK(rec == doctest::Approx(a_t).epsilon(1e-9));

    // inflated ZEM implies an over-bound acceleration; clamp holds
    const double rec2 =
        recover_target_accel({t_go, z + 1e6, lambda, gamma_t}, {gamma_m, a_m}, g);
    CHECK(rec2 == g.evader.a_max);
}

// The pushforward test: propagating the game-space image of the physical
// truth must match the image of the propagated truth.
TEST_CASE("game dynamics track the truth simulator") {
    const ScenarioConfig cfg;
    const GameGeometry g = cfg.geometry();
    const EvaderPolicy policy{100.0, 1};  // no switch inside the window
    TruthState truth = initial_truth(cfg);
    // non-trivial channel content
    truth.a_m = 100.0;
    truth.a_t = -150.0;

    GameState x = truth_game_state(truth, g);
    OwnState own{truth.gamma_m, truth.a_m};
    const double dt = cfg.dt();
    const double u_m = 0.4 * g.pursuer.a_max;
    const double u_t = evader_command(truth.mode, g);

    for (int k = 0; k < 50; ++k) {
        const GameStep s = propagate_game_state(x, own, u_m, u_t, dt, g);
        x = s.state;
        own = s.own;
        truth = step_truth(truth, u_m, policy, dt, g);
    }
    const GameState ref = truth_game_state(truth, g);
    CHECK(close_rel(x.t_go, ref.t_go, 1e-6, 1e-9));
    CHECK(close_rel(x.z, ref.z, 1e-6, 1e-6));
    CHECK(close_rel(x.lambda, ref.lambda, 1e-6, 1e-12));
    CHECK(close_rel(x.gamma_t, ref.gamma_t, 1e-6, 1e-12));
    CHECK(close_rel(own.gamma_m, truth.gamma_m, 1e-9, 1e-12));
    CHECK(close_rel(own.a_m, truth.a_m, 1e-9, 1e-9));
}
