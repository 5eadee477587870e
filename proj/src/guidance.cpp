#include "dgl/guidance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace dgl {

LawKind law_from_string(const std::string& s) {
    if (s == "dgl1") return LawKind::Dgl1;
    if (s == "eadgl1") return LawKind::Eadgl1;
    if (s == "iets") return LawKind::Iets;
    throw std::invalid_argument("unknown law: " + s);
}

const char* to_string(LawKind k) {
    switch (k) {
        case LawKind::Dgl1: return "dgl1";
        case LawKind::Eadgl1: return "eadgl1";
        case LawKind::Iets: return "iets";
    }
    return "?";
}

const char* to_string(CommandMode m) {
    switch (m) {
        case CommandMode::Dgl1Regular: return "dgl1_regular";
        case CommandMode::Dgl1Linear: return "dgl1_linear";
        case CommandMode::H1: return "H1";
        case CommandMode::H2: return "H2";
        case CommandMode::H3: return "H3";
        case CommandMode::H4: return "H4";
        case CommandMode::Shaping: return "shaping";
        case CommandMode::Fallback: return "fallback";
    }
    return "?";
}

GuidanceCommand dgl1_command(const GameState& s, double k_frac, const GameGeometry& g) {
    if (!(k_frac > 0.0 && k_frac <= 1.0)) throw std::domain_error("dgl1_command: k outside (0,1]");
    const double zs = singular_boundary(std::max(s.t_go, 0.0), g);
    const double a = g.pursuer.a_max;
    if (std::abs(s.z) <= zs) {
        if (zs <= 0.0) {
            const double sgn = s.z > 0.0 ? 1.0 : (s.z < 0.0 ? -1.0 : 0.0);
            return {a * sgn, CommandMode::Dgl1Linear};
        }
        return {a * chatter_ratio(s.z, zs, k_frac), CommandMode::Dgl1Linear};
    }
    return {s.z > 0.0 ? a : -a, CommandMode::Dgl1Regular};
}

GuidanceCommand bayesian_mode_command(Hypothesis h, const ParticleCloud& cloud, double k_frac,
                                      bool chatter_in_ratio, const GameGeometry& g) {
    const double a = g.pursuer.a_max;
    if (h == Hypothesis::H1) return {a, CommandMode::H1};
    if (h == Hypothesis::H4) return {-a, CommandMode::H4};

    double mass = 0.0, ratio = 0.0;
    for (const auto& p : cloud.particles) {
        if (classify(p, g) != h) continue;
        const double zs = singular_boundary(std::max(p.state.t_go, 0.0), g);
        double r;
        if (zs <= 0.0)
            r = p.state.z > 0.0 ? 1.0 : (p.state.z < 0.0 ? -1.0 : 0.0);
        else
            r = std::clamp(p.state.z / zs, -1.0, 1.0);
        ratio += p.weight * r;
        mass += p.weight;
    }
    if (mass <= 0.0)
        throw std::logic_error("bayesian_mode_command: empty interior hypothesis");
    ratio /= mass;
    const double scaled = chatter_in_ratio ? ratio / k_frac : ratio;
    const double u = a * std::clamp(scaled, -1.0, 1.0);
    return {u, h == Hypothesis::H2 ? CommandMode::H2 : CommandMode::H3};
}

StepResult GuidanceLaw::step(const StepInputs& in) {
    if (!in.cloud_now || !in.cloud_prev) throw std::invalid_argument("GuidanceLaw::step: null cloud");
    const CloudEstimate est = estimate(*in.cloud_now);
    if (settings_.kind == LawKind::Dgl1) {
        StepResult r;
        r.command = dgl1_command(est.mean, settings_.k_frac, geom_);
        return r;
    }
    return decide_and_command(in, est);
}

StepResult GuidanceLaw::decide_and_command(const StepInputs& in, const CloudEstimate& est) {
    using clock = std::chrono::steady_clock;
    StepResult r;
    r.decision_ran = true;
    ++counters_.decision_instants;
    ++counters_.fast_attempts;

    const auto t0 = clock::now();
    const FastDecision fast =
        try_fast_decision(*in.cloud_now, settings_.tau_max, settings_.k_frac, geom_);
    r.likelihood = likelihoods(*in.cloud_now, geom_);

    bool ambiguous = false;
    std::optional<Hypothesis> chosen;
    if (fast.verdict == FastVerdict::Hyp) {
        ++counters_.fast_hypothesis;
        r.fast_path_used = true;
        chosen = fast.hypothesis;
        r.risk = Eigen::Vector4d::Constant(std::numeric_limits<double>::quiet_NaN());
        r.risk(static_cast<int>(fast.hypothesis)) = 0.0;  // certified
        counters_.fast_seconds += std::chrono::duration<double>(clock::now() - t0).count();
    } else if (fast.verdict == FastVerdict::Ambiguous) {
        ++counters_.fast_ambiguous;
        r.fast_path_used = true;
        ambiguous = true;
        r.risk = Eigen::Vector4d::Zero();  // all four certified zero
        counters_.fast_seconds += std::chrono::duration<double>(clock::now() - t0).count();
    } else {
        DecisionInputs din;
        din.now = in.cloud_now;
        din.prev = in.cloud_prev;
        din.u_m_prev = in.u_m_prev;
        din.own_prev = in.own_prev;
        din.tpm = in.tpm;
        din.dt = in.dt;
        din.tau_max = settings_.tau_max;
        din.k_frac = settings_.k_frac;
        din.eps_risk = settings_.eps_risk;
        din.geom = &geom_;
        const DecisionReport rep = decide(din);
        ++counters_.full_criterion;
        counters_.full_seconds += std::chrono::duration<double>(clock::now() - t0).count();
        r.prior = rep.prior;
        r.risk = rep.risk;
        if (rep.ambiguous)
            ambiguous = true;
        else
            chosen = rep.chosen;
    }
    r.ambiguous = ambiguous;
    r.chosen = chosen;

    if (chosen) {
        r.command = bayesian_mode_command(*chosen, *in.cloud_now, settings_.k_frac,
                                          settings_.chatter_in_decision, geom_);
        return r;
    }

    // No unique optimum: IETS shapes the trajectory (outside the endgame
    // cutoff); EADGL1 falls back to the regular law on the mean estimate.
    if (settings_.kind == LawKind::Iets && est.mean.t_go >= settings_.shaping_cutoff) {
        ++counters_.shaping_invocations;
        const auto u = select_command(*in.cloud_now, settings_.shaping, in.own_now, in.dt, geom_,
                                      &r.shaping_rows);
        if (u) {
            r.command = {*u, CommandMode::Shaping};
            return r;
        }
    }
    r.command = dgl1_command(est.mean, settings_.k_frac, geom_);
    r.command.mode_tag = CommandMode::Fallback;
    return r;
}

}  // namespace dgl
