#include "dgl/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstring>

namespace dgl {

// The scenario is expressed in the engagement frame: initial LOS along +X,
// which is where the LOS-linearized game-space formulas are valid. The
// interceptor aims at the initial target position; the target flies head-on
// (offset geometries tilt both accordingly).
TruthState initial_truth(const ScenarioConfig& cfg) {
    TruthState s{};
    const double r = cfg.initial_range;
    const double off = cfg.lateral_offset;
    s.x_m = 0.0;
    s.y_m = 0.0;
    s.x_t = std::sqrt(r * r - off * off);
    s.y_t = off;
    s.gamma_m = std::atan2(s.y_t, s.x_t);
    s.gamma_t = -s.gamma_m;  // head-on along the initial LOS
    s.a_m = 0.0;
    s.a_t = 0.0;
    s.mode = cfg.evader_initial_mode;
    s.t = 0.0;
    return s;
}

GameState truth_game_state(const TruthState& s, const GameGeometry& g) {
    const RelativeState rel = derive_relative(s, g);
    const auto t_go = t_go_estimate(rel.rho, rel.v_rho);
    const double tg = t_go ? *t_go : 0.0;
    const auto [a_mn, a_tn] = normal_accelerations(s.a_m, s.gamma_m, s.a_t, s.gamma_t, rel.lambda);
    const double z = zem_from_physical(tg, rel.lambda, rel.v_lambda, a_mn, a_tn, g);
    return {tg, z, rel.lambda, s.gamma_t};
}

namespace {

ParticleCloud point_mass_cloud(const TruthState& truth, const GameGeometry& g, double t) {
    ParticleCloud c;
    c.per_mode = 1;
    c.t = t;
    c.particles.push_back({truth_game_state(truth, g), truth.mode, 1.0});
    return c;
}

std::uint64_t checksum_doubles(const std::vector<double>& xs) {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (double x : xs) {
        std::uint64_t bits;
        std::memcpy(&bits, &x, sizeof(bits));
        h = mix64(h ^ bits);
    }
    return h;
}

}  // namespace

RunRecord run_single(const ScenarioConfig& cfg, LawKind law, double switch_time,
                     std::uint64_t seed, const RunOptions& opts) {
    const auto wall0 = std::chrono::steady_clock::now();
    const GameGeometry geom = cfg.geometry();
    const double dt = cfg.dt();
    const int max_steps = static_cast<int>(std::ceil(cfg.hard_stop_time() / dt)) + 2;

    RngStream rng_radar(seed, Stream::Radar);
    RngStream rng_meas(seed, Stream::Measurement);
    RngStream rng_filter(seed, Stream::Filter);

    // Pre-drawn measurement noise: byte-identical across laws (common random
    // numbers), regardless of how long each law's engagement lasts.
    std::vector<double> meas_noise(static_cast<std::size_t>(max_steps));
    for (auto& v : meas_noise) v = rng_meas.normal();

    RunRecord rec;
    rec.seed = seed;
    rec.law = law;
    rec.switch_time = switch_time;
    rec.meas_noise_checksum = checksum_doubles(meas_noise);

    const EvaderPolicy policy{switch_time, cfg.evader_initial_mode};
    TruthState truth = initial_truth(cfg);

    GuidanceSettings gs;
    gs.kind = law;
    gs.k_frac = cfg.chatter_fraction;
    gs.chatter_in_decision = cfg.chatter_in_decision;
    gs.tau_max = cfg.tau_max;
    gs.eps_risk = cfg.risk_epsilon;
    gs.shaping_cutoff = cfg.shaping_cutoff;
    gs.shaping.n_levels = cfg.shaping_levels;
    gs.shaping.subsample = cfg.shaping_subsample;
    gs.shaping.horizon = cfg.shaping_horizon;
    gs.shaping.w_thres = cfg.shaping_weight_threshold;
    gs.shaping.sigma = cfg.bearing_noise_std;
    gs.shaping.noise = cfg.process_noise;
    GuidanceLaw driver(gs, geom);

    ParticleCloud cloud;
    if (opts.perfect_info) {
        cloud = point_mass_cloud(truth, geom, 0.0);
    } else {
        const RadarSnapshot snap =
            make_radar_snapshot(truth, cfg.radar_covariance(), truth.x_m + cfg.radar_offset_x,
                                truth.y_m + cfg.radar_offset_y, rng_radar);
        cloud = immpf_initialize(snap, cfg.particles_per_mode, rng_radar, geom);
    }
    ParticleCloud cloud_prev = cloud;
    double u_prev = 0.0;
    OwnState own_prev{truth.gamma_m, truth.a_m};

    std::vector<double> ts, rhos;
    ts.reserve(static_cast<std::size_t>(max_steps));
    rhos.reserve(static_cast<std::size_t>(max_steps));

    for (int k = 0; k < max_steps; ++k) {
        const RelativeState rel = derive_relative(truth, geom);
        ts.push_back(truth.t);
        rhos.push_back(rel.rho);
        if (rel.v_rho >= 0.0) {
            // closing ended; one more sample brackets the range minimum
            truth = step_truth(truth, u_prev, policy, dt, geom);
            ts.push_back(truth.t);
            rhos.push_back(derive_relative(truth, geom).rho);
            break;
        }
        if (truth.t >= cfg.hard_stop_time()) {
            rec.hard_stopped = true;
            break;
        }

        const OwnState own_now{truth.gamma_m, truth.a_m};
        if (k > 0) {
            if (opts.perfect_info) {
                cloud = point_mass_cloud(truth, geom, truth.t);
            } else {
                const Measurement meas{
                    truth.t, (truth.gamma_m - rel.lambda) +
                                 cfg.bearing_noise_std * meas_noise[static_cast<std::size_t>(k)]};
                immpf_cycle(cloud, u_prev, own_prev, meas, tpm_at(truth.t, cfg.tpm),
                            cfg.process_noise, cfg.bearing_noise_std, dt, rng_filter, geom);
            }
        }

        StepInputs in;
        in.cloud_now = &cloud;
        in.cloud_prev = &cloud_prev;
        in.u_m_prev = u_prev;
        in.own_prev = own_prev;
        in.own_now = own_now;
        in.tpm = tpm_at(truth.t, cfg.tpm);
        in.dt = dt;
        const StepResult step = driver.step(in);

        const GameState truth_game = truth_game_state(truth, geom);
        const int true_hyp =
            static_cast<int>(classify({truth_game, truth.mode, 1.0}, geom)) + 1;

        if (opts.record_steps) {
            const CloudEstimate est = estimate(cloud);
            const Eigen::Matrix2d cov = cov_tgo_z(cloud);
            StepLog row;
            row.t = truth.t;
            row.x_m = truth.x_m;
            row.y_m = truth.y_m;
            row.x_t = truth.x_t;
            row.y_t = truth.y_t;
            row.rho = rel.rho;
            row.lambda = rel.lambda;
            row.z_true = truth_game.z;
            row.z_est = est.mean.z;
            row.t_go_true = truth_game.t_go;
            row.t_go_est = est.mean.t_go;
            row.u_m = step.command.u_m;
            row.mode_true = truth.mode;
            row.hypothesis_chosen =
                step.decision_ran ? (step.chosen ? static_cast<int>(*step.chosen) + 1 : 0) : -1;
            row.fast_path_used = step.fast_path_used;
            row.cov_tt = cov(0, 0);
            row.cov_tz = cov(0, 1);
            row.cov_zz = cov(1, 1);
            row.mode_prob_1 = est.mode_probs[0];
            rec.steps.push_back(row);
        }
        if (opts.dump_decisions && step.decision_ran) {
            DecisionLogRow row;
            row.t = truth.t;
            row.likelihood = step.likelihood;
            row.prior = step.prior;
            row.risk = step.risk;
            row.outcome = step.chosen ? static_cast<int>(*step.chosen) + 1 : 0;
            row.fast_path = step.fast_path_used;
            row.true_hypothesis = true_hyp;
            rec.decisions.push_back(row);
        }
        if (opts.dump_cloud) {
            int idx = 0;
            for (const auto& p : cloud.particles)
                rec.cloud_dump.push_back({truth.t, idx++, p.mode, p.weight, p.state.t_go,
                                          p.state.z, p.state.lambda, p.state.gamma_t});
        }
        if (opts.dump_shaping)
            for (const auto& r : step.shaping_rows) rec.shaping_log.push_back({truth.t, r});

        cloud_prev = cloud;
        u_prev = step.command.u_m;
        own_prev = own_now;
        truth = step_truth(truth, step.command.u_m, policy, dt, geom);
    }

    const MissResult m = miss_distance(ts, rhos);
    rec.miss = m.miss;
    rec.closest_approach_found = m.closest_approach_found;
    rec.counters = driver.counters();
    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
    return rec;
}

}  // namespace dgl
