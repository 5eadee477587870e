#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dgl/bayes.hpp"
#include "dgl/fast_path.hpp"
#include "dgl/immpf.hpp"
#include "dgl/shaping.hpp"

namespace dgl {

enum class LawKind { Dgl1, Eadgl1, Iets };

LawKind law_from_string(const std::string& s);
const char* to_string(LawKind k);

enum class CommandMode {
    Dgl1Regular,
    Dgl1Linear,
    H1,
    H2,
    H3,
    H4,
    Shaping,
    Fallback,
};

const char* to_string(CommandMode m);

struct GuidanceCommand {
    double u_m;
    CommandMode mode_tag;
};

/// Bang-bang outside the singular region, saturated linear inside (chattering
/// fraction k). At z* = 0 the linear branch degenerates to sign(z)*a_max.
GuidanceCommand dgl1_command(const GameState& s, double k_frac, const GameGeometry& g);

/// Command of a decided hypothesis: the canonical bang for H1/H4, the
/// weighted-mean boundary ratio through the chattering logic for H2/H3.
GuidanceCommand bayesian_mode_command(Hypothesis h, const ParticleCloud& cloud, double k_frac,
                                      bool chatter_in_ratio, const GameGeometry& g);

struct LawCounters {
    long decision_instants = 0;
    long fast_attempts = 0;
    long fast_hypothesis = 0;
    long fast_ambiguous = 0;
    long full_criterion = 0;
    long shaping_invocations = 0;
    double fast_seconds = 0.0;
    double full_seconds = 0.0;
};

struct GuidanceSettings {
    LawKind kind = LawKind::Dgl1;
    double k_frac = 0.7;
    bool chatter_in_decision = true;
    double tau_max = 0.16;
    double eps_risk = 1e-6;
    double shaping_cutoff = 1.0;  // no shaping when estimated t_go is below this
    ShapingParams shaping;
};

struct StepInputs {
    const ParticleCloud* cloud_now = nullptr;
    const ParticleCloud* cloud_prev = nullptr;
    double u_m_prev = 0.0;
    OwnState own_prev{0.0, 0.0};
    OwnState own_now{0.0, 0.0};
    Eigen::Matrix2d tpm = Eigen::Matrix2d::Identity();
    double dt = 0.01;
};

struct StepResult {
    GuidanceCommand command{0.0, CommandMode::Dgl1Linear};
    // decision trace for the log; NaN prior/risk entries mean "not computed"
    bool decision_ran = false;
    bool fast_path_used = false;
    bool ambiguous = false;
    std::optional<Hypothesis> chosen;
    Eigen::Vector4d likelihood = Eigen::Vector4d::Zero();
    Eigen::Vector4d prior = Eigen::Vector4d::Constant(std::numeric_limits<double>::quiet_NaN());
    Eigen::Vector4d risk = Eigen::Vector4d::Constant(std::numeric_limits<double>::quiet_NaN());
    std::vector<ShapingLogRow> shaping_rows;
};

/// Per-run law driver; owns counters and timing.
class GuidanceLaw {
  public:
    GuidanceLaw(const GuidanceSettings& settings, const GameGeometry& geom)
        : settings_(settings), geom_(geom) {}

    StepResult step(const StepInputs& in);

    const LawCounters& counters() const { return counters_; }

  private:
    StepResult decide_and_command(const StepInputs& in, const CloudEstimate& est);

    GuidanceSettings settings_;
    GameGeometry geom_;
    LawCounters counters_;
};

}  // namespace dgl
