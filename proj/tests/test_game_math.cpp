#include <doctest.h>

#include <cmath>
#include <random>

#include "dgl/game_math.hpp"
#include "test_support.hpp"

using namespace dgl;
using dgl::test::nominal_geometry;

TEST_CASE("psi values and monotonicity") {
    CHECK(psi(0.0) == 0.0);
    CHECK(psi(1.0) == doctest::Approx(0.36787944117144233).epsilon(1e-14));
    CHECK(psi(10.0) == doctest::Approx(9.000045399929762).epsilon(1e-14));
    CHECK_THROWS_AS(psi(-1e-9), std::domain_error);
    CHECK(psi(750.0) == 749.0);

    double prev = psi(0.0);
    for (int i = 1; i <= 1000; ++i) {
        const double cur = psi(i * 0.01);
        CHECK(cur > prev);
        prev = cur;
    }
}

TEST_CASE("psi derivative matches finite differences") {
    const double h = 1e-6;
    for (double theta = h; theta <= 10.0; theta += 0.1) {
        const double fd = (psi(theta + h) - psi(theta - h)) / (2 * h);
        CHECK(psi_deriv(theta) == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("upsilon values and algebraic identity") {
    CHECK(upsilon(0.0) == 0.0);
    CHECK(upsilon(1.0) == doctest::Approx(0.13212055882855767).epsilon(1e-14));
    CHECK_THROWS_AS(upsilon(-0.1), std::domain_error);
    for (double theta : {0.1, 1.0, 5.0, 0.03, 2.7, 9.9}) {
        CHECK(std::abs(upsilon(theta) + psi(theta) - 0.5 * theta * theta) < 1e-12);
        CHECK(upsilon(theta) >= 0.0);
    }
}

TEST_CASE("singular boundary at nominal parameters") {
    const GameGeometry g = nominal_geometry();
    CHECK(singular_boundary(0.0, g) == 0.0);
    // frozen high-precision evaluation, nominal 45g/20g, tau 0.2
    CHECK(singular_boundary(2.0, g) == doctest::Approx(402.0722047787788).epsilon(1e-13));
    for (double t = 0.0; t <= 3.0; t += 0.01) CHECK(singular_boundary(t, g) >= 0.0);

    // cubic asymptote: error term is theta/4 + O(theta^2)
    const auto asym = [&](double t_go) {
        return (t_go * t_go * t_go / 6.0) *
               (g.pursuer.a_max / g.pursuer.tau - g.evader.a_max / g.evader.tau);
    };
    const double e005 = std::abs(singular_boundary(0.05, g) - asym(0.05)) /
                        singular_boundary(0.05, g);
    CHECK(e005 == doctest::Approx(0.063265).epsilon(1e-3));
    const double e0039 = std::abs(singular_boundary(0.039, g) - asym(0.039)) /
                         singular_boundary(0.039, g);
    CHECK(e0039 < 0.05);
    // sign of the small-t_go limit follows the bracket
    CHECK(asym(0.01) > 0.0);
    CHECK(singular_boundary(0.01, g) > 0.0);
}

TEST_CASE("zem_from_physical composition") {
    const GameGeometry g = nominal_geometry();
    CHECK(zem_from_physical(1.0, 0.3, 0.0, 0.0, 0.0, g) == 0.0);
    CHECK(zem_from_physical(1.0, 0.0, 100.0, 0.0, 0.0, g) == doctest::Approx(100.0));

    // independent re-evaluation of the defining expression
    const double t_go = 1.7, lambda = 0.21, v_lam = -140.0, a_mn = 210.0, a_tn = -95.0;
    const double tm = g.pursuer.tau, tt = g.evader.tau;
    const double expect = t_go * v_lam * std::cos(lambda) -
                          a_mn * tm * tm * (std::exp(-t_go / tm) + t_go / tm - 1.0) +
                          a_tn * tt * tt * (std::exp(-t_go / tt) + t_go / tt - 1.0);
    CHECK(zem_from_physical(t_go, lambda, v_lam, a_mn, a_tn, g) ==
          doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("normal accelerations") {
    const auto [am1, at1] = normal_accelerations(10.0, 0.4, -7.0, -0.4, 0.4);
    CHECK(am1 == doctest::Approx(10.0));
    CHECK(at1 == doctest::Approx(-7.0));
    const auto [am2, at2] = normal_accelerations(10.0, M_PI / 2 + 0.1, -7.0, 0.5, 0.1);
    CHECK(am2 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(am2 == doctest::Approx(10.0 * std::cos(M_PI / 2)).epsilon(1e-9));
    CHECK(at2 == doctest::Approx(-7.0 * std::cos(0.6)));
}

TEST_CASE("t_go estimate") {
    CHECK(*t_go_estimate(5000.0, -5000.0) == doctest::Approx(1.0));
    CHECK(*t_go_estimate(0.0, -100.0) == 0.0);
    CHECK(!t_go_estimate(1000.0, 10.0).has_value());
    CHECK(!t_go_estimate(1000.0, 0.0).has_value());
    CHECK_THROWS_AS(t_go_estimate(-1.0, -10.0), std::domain_error);
}

TEST_CASE("physical_from_game inverts the transform") {
    const GameGeometry g = nominal_geometry();
    const GameState s{2.0, 137.0, 0.8, -0.7};
    const double v_rho = -2500.0, v_lam = -80.0, a_mn = 120.0;
    const auto rec = physical_from_game(s, v_rho, v_lam, a_mn, g);
    CHECK(rec.rho == doctest::Approx(5000.0));

    // feeding a_t back through the forward map reproduces z
    const double a_tn = rec.a_t * std::cos(s.gamma_t + s.lambda);
    const double z_back = zem_from_physical(s.t_go, s.lambda, v_lam, a_mn, a_tn, g);
    CHECK(z_back == doctest::Approx(s.z).epsilon(1e-9));

    const GameState degenerate{0.0, 1.0, 0.0, 0.0};
    CHECK_THROWS_AS(physical_from_game(degenerate, -100.0, 0.0, 0.0, g), std::domain_error);
}

namespace {

// RK4 on the linear ZEM evolution equation, the independent oracle for the
// closed-form propagation.
double zem_rk4(double z, double t_go, double tau, double u_m, double u_t, const GameGeometry& g,
               int n_steps) {
    const double h = tau / n_steps;
    double t = t_go;
    for (int i = 0; i < n_steps; ++i) {
        const double k1 = zem_rate_linear(t, u_m, u_t, g);
        const double k2 = zem_rate_linear(t - 0.5 * h, u_m, u_t, g);
        const double k3 = k2;
        const double k4 = zem_rate_linear(t - h, u_m, u_t, g);
        z += (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4);
        t -= h;
    }
    return z;
}

}  // namespace

TEST_CASE("zem_propagate against the ODE oracle") {
    const GameGeometry g = nominal_geometry();
    CHECK(zem_propagate(42.0, 2.0, 0.0, 300.0, -100.0, g) == 42.0);
    CHECK(zem_propagate(42.0, 2.0, 0.7, 0.0, 0.0, g) == 42.0);
    CHECK_THROWS_AS(zem_propagate(0.0, 1.0, 1.5, 0.0, 0.0, g), std::domain_error);

    const double z1 = zem_propagate(0.0, 2.0, 0.16, g.pursuer.a_max, -g.evader.a_max, g);
    const double z1_ode = zem_rk4(0.0, 2.0, 0.16, g.pursuer.a_max, -g.evader.a_max, g, 400);
    CHECK(z1 == doctest::Approx(z1_ode).epsilon(1e-6));

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uz(-800.0, 800.0), ut(0.05, 3.0), uu(-1.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double z = uz(rng);
        const double t_go = ut(rng);
        const double tau = std::uniform_real_distribution<double>(0.0, t_go)(rng);
        const double um = uu(rng) * g.pursuer.a_max;
        const double utg = uu(rng) * g.evader.a_max;
        const double closed = zem_propagate(z, t_go, tau, um, utg, g);
        const double ode = zem_rk4(z, t_go, tau, um, utg, g, 200);
        CHECK(dgl::test::close_rel(closed, ode, 1e-6, 1e-9));
    }
}

TEST_CASE("zem_propagate composes over subintervals") {
    const GameGeometry g = nominal_geometry();
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uz(-500.0, 500.0), uu(-1.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double z = uz(rng);
        const double t_go = 2.5;
        const double tau1 = 0.07, tau2 = 0.06;
        const double um = uu(rng) * g.pursuer.a_max;
        const double ut = uu(rng) * g.evader.a_max;
        const double direct = zem_propagate(z, t_go, tau1 + tau2, um, ut, g);
        const double stepped =
            zem_propagate(zem_propagate(z, t_go, tau1, um, ut, g), t_go - tau1, tau2, um, ut, g);
        CHECK(direct == doctest::Approx(stepped).epsilon(1e-9));
    }
}
