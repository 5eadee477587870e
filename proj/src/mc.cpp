#include "dgl/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include <nlohmann/json.hpp>

namespace dgl {

double percentile_nearest_rank(std::vector<double> samples, double p) {
    if (samples.empty()) throw std::invalid_argument("percentile: empty sample set");
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("percentile: p outside (0, 1]");
    std::sort(samples.begin(), samples.end());
    const auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(samples.size())));
    return samples[rank - 1];
}

McSummary run_mc(const ScenarioConfig& cfg, const std::vector<LawKind>& laws,
                 const std::vector<double>& switch_times, int runs_per_point,
                 std::uint64_t master_seed, int threads) {
    if (runs_per_point < 1) throw std::invalid_argument("run_mc: runs_per_point < 1");
    if (laws.empty() || switch_times.empty()) throw std::invalid_argument("run_mc: empty sweep");

    struct Job {
        std::size_t law_i, switch_i;
        int run_i;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (std::size_t li = 0; li < laws.size(); ++li)
        for (std::size_t si = 0; si < switch_times.size(); ++si)
            for (int r = 0; r < runs_per_point; ++r)
                jobs.push_back({li, si, r, derive_seed(master_seed, si, static_cast<std::uint64_t>(r))});

    struct Slot {
        bool failed = false;
        double miss = 0.0;
        double wall = 0.0;
        LawCounters counters;
        std::string error;
    };
    std::vector<Slot> slots(jobs.size());

    RunOptions opts;
    opts.record_steps = false;

    std::atomic<std::size_t> next{0};
    const auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            const Job& j = jobs[i];
            try {
                const RunRecord rec =
                    run_single(cfg, laws[j.law_i], switch_times[j.switch_i], j.seed, opts);
                slots[i].miss = rec.miss;
                slots[i].wall = rec.wall_seconds;
                slots[i].counters = rec.counters;
            } catch (const std::exception& e) {
                slots[i].failed = true;
                slots[i].error = e.what();
            }
        }
    };

    const int n_threads = std::max(1, threads);
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    McSummary out;
    out.master_seed = master_seed;
    out.runs_per_point = runs_per_point;
    out.switch_times = switch_times;
    out.laws = laws;

    std::size_t failures = 0;
    for (std::size_t li = 0; li < laws.size(); ++li) {
        LawStats ls;
        double wall_total = 0.0;
        long run_count = 0;
        for (std::size_t si = 0; si < switch_times.size(); ++si) {
            SwitchPointStats sp;
            sp.switch_time = switch_times[si];
            for (std::size_t i = 0; i < jobs.size(); ++i) {
                const Job& j = jobs[i];
                if (j.law_i != li || j.switch_i != si) continue;
                if (slots[i].failed) {
                    ++failures;
                    out.failures.push_back({j.seed, switch_times[si], slots[i].error});
                    continue;
                }
                sp.misses.push_back(slots[i].miss);
                wall_total += slots[i].wall;
                ++run_count;
                ls.counters.decision_instants += slots[i].counters.decision_instants;
                ls.counters.fast_attempts += slots[i].counters.fast_attempts;
                ls.counters.fast_hypothesis += slots[i].counters.fast_hypothesis;
                ls.counters.fast_ambiguous += slots[i].counters.fast_ambiguous;
                ls.counters.full_criterion += slots[i].counters.full_criterion;
                ls.counters.shaping_invocations += slots[i].counters.shaping_invocations;
                ls.counters.fast_seconds += slots[i].counters.fast_seconds;
                ls.counters.full_seconds += slots[i].counters.full_seconds;
            }
            if (!sp.misses.empty()) {
                sp.p50 = percentile_nearest_rank(sp.misses, 0.50);
                sp.p95 = percentile_nearest_rank(sp.misses, 0.95);
            }
            ls.pooled_sorted.insert(ls.pooled_sorted.end(), sp.misses.begin(), sp.misses.end());
            ls.per_switch.push_back(std::move(sp));
        }
        std::sort(ls.pooled_sorted.begin(), ls.pooled_sorted.end());
        if (!ls.pooled_sorted.empty()) {
            ls.pooled_p50 = percentile_nearest_rank(ls.pooled_sorted, 0.50);
            ls.pooled_p95 = percentile_nearest_rank(ls.pooled_sorted, 0.95);
        }
        ls.mean_wall_seconds = run_count > 0 ? wall_total / run_count : 0.0;
        out.stats[to_string(laws[li])] = std::move(ls);
    }

    const std::size_t total = jobs.size();
    if (failures * 100 > total) out.aborted = true;  // > 1% failures
    return out;
}

std::string summary_to_json(const McSummary& s, bool include_timing) {
    nlohmann::json j;
    j["master_seed"] = s.master_seed;
    j["runs_per_point"] = s.runs_per_point;
    j["switch_times"] = s.switch_times;
    j["aborted"] = s.aborted;
    nlohmann::json jf = nlohmann::json::array();
    for (const auto& f : s.failures)
        jf.push_back({{"seed", f.seed}, {"switch_time", f.switch_time}, {"error", f.error}});
    j["failures"] = jf;
    for (const auto& [name, ls] : s.stats) {
        nlohmann::json jl;
        nlohmann::json per = nlohmann::json::array();
        for (const auto& sp : ls.per_switch)
            per.push_back({{"switch_time", sp.switch_time},
                           {"p50", sp.p50},
                           {"p95", sp.p95},
                           {"misses", sp.misses}});
        jl["per_switch"] = per;
        jl["pooled"] = {{"p50", ls.pooled_p50},
                        {"p95", ls.pooled_p95},
                        {"cdf_samples", ls.pooled_sorted}};
        const auto& c = ls.counters;
        const long fast_hits = c.fast_hypothesis + c.fast_ambiguous;
        jl["fast_path"] = {
            {"attempts", c.fast_attempts},
            {"hypothesis", c.fast_hypothesis},
            {"ambiguous", c.fast_ambiguous},
            {"full_criterion", c.full_criterion},
            {"shaping_invocations", c.shaping_invocations},
            {"success_fraction",
             c.fast_attempts > 0 ? static_cast<double>(fast_hits) / c.fast_attempts : 0.0}};
        if (include_timing) {
            jl["timing"] = {
                {"mean_run_wall_s", ls.mean_wall_seconds},
                {"mean_fast_decision_s", fast_hits > 0 ? c.fast_seconds / fast_hits : 0.0},
                {"mean_full_decision_s",
                 c.full_criterion > 0 ? c.full_seconds / c.full_criterion : 0.0}};
        }
        j["laws"][name] = jl;
    }
    return j.dump(2);
}

}  // namespace dgl
