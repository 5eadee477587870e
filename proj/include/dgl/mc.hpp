#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dgl/runner.hpp"

namespace dgl {

/// Nearest-rank percentile: the ceil(p*n)-th order statistic (1-indexed).
double percentile_nearest_rank(std::vector<double> samples, double p);

struct SwitchPointStats {
    double switch_time = 0.0;
    double p50 = 0.0;
    double p95 = 0.0;
    std::vector<double> misses;  // in run order
};

struct FailedRun {
    std::uint64_t seed;
    double switch_time;
    std::string error;
};

struct LawStats {
    std::vector<SwitchPointStats> per_switch;
    std::vector<double> pooled_sorted;  // pooled miss CDF samples
    double pooled_p50 = 0.0;
    double pooled_p95 = 0.0;
    LawCounters counters;       // summed over runs
    double mean_wall_seconds = 0.0;
};

struct McSummary {
    std::uint64_t master_seed = 0;
    int runs_per_point = 0;
    std::vector<double> switch_times;
    std::vector<LawKind> laws;
    std::map<std::string, LawStats> stats;  // keyed by law name
    std::vector<FailedRun> failures;
    bool aborted = false;  // > 1% failed runs
};

/// Sweep: for each law x switch time, runs_per_point independent engagements
/// with per-run seeds derived from (master, switch index, run index) — shared
/// across laws so compared runs see common random numbers. Fans out across
/// threads; the result is identical for any thread count.
McSummary run_mc(const ScenarioConfig& cfg, const std::vector<LawKind>& laws,
                 const std::vector<double>& switch_times, int runs_per_point,
                 std::uint64_t master_seed, int threads);

/// Summary as JSON; timing sections are skipped when include_timing is false
/// (the deterministic part is bit-stable across thread counts).
std::string summary_to_json(const McSummary& s, bool include_timing);

}  // namespace dgl
