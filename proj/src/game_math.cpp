#include "dgl/game_math.hpp"

#include <cmath>
#include <stdexcept>

namespace dgl {

namespace {
// Beyond this the exponential underflows past double range; the kernels are
// exactly their polynomial parts.
constexpr double kExpFlush = 700.0;
}  // namespace

double psi(double theta) {
    if (theta < 0.0) throw std::domain_error("psi: negative argument");
    if (theta > kExpFlush) return theta - 1.0;
    return std::exp(-theta) + theta - 1.0;
}

double upsilon(double theta) {
    if (theta < 0.0) throw std::domain_error("upsilon: negative argument");
    if (theta > kExpFlush) return 0.5 * theta * theta - theta + 1.0;
    return 0.5 * theta * theta - std::exp(-theta) - theta + 1.0;
}

double psi_deriv(double theta) {
    if (theta < 0.0) throw std::domain_error("psi_deriv: negative argument");
    if (theta > kExpFlush) return 1.0;
    return 1.0 - std::exp(-theta);
}

double singular_boundary(double t_go, const GameGeometry& g) {
    const double tm = g.pursuer.tau;
    const double tt = g.evader.tau;
    return g.pursuer.a_max * tm * tm * upsilon(t_go / tm) -
           g.evader.a_max * tt * tt * upsilon(t_go / tt);
}

double zem_from_physical(double t_go, double lambda, double v_lambda, double a_m_normal,
                         double a_t_normal, const GameGeometry& g) {
    const double tm = g.pursuer.tau;
    const double tt = g.evader.tau;
    const double z_pn = t_go * v_lambda * std::cos(lambda);
    const double z_acc =
        -a_m_normal * tm * tm * psi(t_go / tm) + a_t_normal * tt * tt * psi(t_go / tt);
    return z_pn + z_acc;
}

std::pair<double, double> normal_accelerations(double a_m, double gamma_m, double a_t,
                                               double gamma_t, double lambda) {
    return {a_m * std::cos(gamma_m - lambda), a_t * std::cos(gamma_t + lambda)};
}

std::optional<double> t_go_estimate(double rho, double v_rho) {
    if (rho < 0.0) throw std::domain_error("t_go_estimate: negative range");
    if (v_rho >= 0.0) return std::nullopt;
    return -rho / v_rho;
}

PhysicalRecovery physical_from_game(const GameState& s, double v_rho, double v_lambda,
                                    double a_m_normal, const GameGeometry& g) {
    const double tm = g.pursuer.tau;
    const double tt = g.evader.tau;
    const double delta_t = s.gamma_t + s.lambda;
    const double denom = std::cos(delta_t) * tt * tt * psi(s.t_go / tt);
    if (std::abs(denom) < 1e-12)
        throw std::domain_error("physical_from_game: singular transform");
    const double numer =
        s.z - s.t_go * v_lambda * std::cos(s.lambda) + a_m_normal * tm * tm * psi(s.t_go / tm);
    return {-v_rho * s.t_go, numer / denom};
}

double zem_propagate(double z, double t_go, double tau, double u_m, double u_t,
                     const GameGeometry& g) {
    if (tau < 0.0 || tau > t_go) throw std::domain_error("zem_propagate: tau outside [0, t_go]");
    const double tm = g.pursuer.tau;
    const double tt = g.evader.tau;
    const double adv = t_go - tau;
    const double dm = upsilon(t_go / tm) - upsilon(adv / tm);
    const double dt = upsilon(t_go / tt) - upsilon(adv / tt);
    return z - u_m * tm * tm * dm + u_t * tt * tt * dt;
}

double zem_rate_linear(double t_go, double u_m, double u_t, const GameGeometry& g) {
    const double tm = g.pursuer.tau;
    const double tt = g.evader.tau;
    return -tm * psi(t_go / tm) * u_m + tt * psi(t_go / tt) * u_t;
}

}  // namespace dgl
