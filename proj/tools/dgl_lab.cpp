#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "dgl/io.hpp"
#include "dgl/mc.hpp"
#include "dgl/runner.hpp"

namespace {

dgl::ScenarioConfig config_or_default(const std::string& path) {
    if (path.empty()) {
        dgl::ScenarioConfig cfg;
        cfg.validate();
        return cfg;
    }
    return dgl::load_config(path);
}

std::vector<double> parse_switch_grid(const std::string& spec) {
    // "a,b,c" list or "start:step:stop" range
    std::vector<double> out;
    if (spec.find(':') != std::string::npos) {
        double start, step, stop;
        char c1, c2;
        std::istringstream ss(spec);
        if (!(ss >> start >> c1 >> step >> c2 >> stop) || c1 != ':' || c2 != ':' || step <= 0.0)
            throw dgl::ConfigError("bad switch grid range: " + spec);
        for (double t = start; t <= stop + 1e-12; t += step) out.push_back(t);
    } else {
        std::istringstream ss(spec);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (tok.empty()) continue;
            out.push_back(std::stod(tok));
        }
    }
    if (out.empty()) throw dgl::ConfigError("empty switch grid: " + spec);
    return out;
}

std::vector<dgl::LawKind> parse_laws(const std::string& spec) {
    std::vector<dgl::LawKind> out;
    std::istringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(dgl::law_from_string(tok));
    }
    if (out.empty()) throw dgl::ConfigError("empty law list: " + spec);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stochastic interception guidance laboratory"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".";

    auto* run = app.add_subcommand("run", "single closed-loop engagement");
    std::string run_law = "dgl1";
    double run_switch = 2.0;
    std::uint64_t run_seed = 1;
    bool dump_cloud = false, dump_decisions = false, perfect_info = false;
    run->add_option("--config", config_path, "scenario config file");
    run->add_option("--law", run_law, "dgl1|eadgl1|iets")->required();
    run->add_option("--switch-time", run_switch, "evasion switch time [s]")->required();
    run->add_option("--seed", run_seed, "run seed")->required();
    run->add_flag("--dump-cloud", dump_cloud, "write per-cycle particle cloud CSV");
    run->add_flag("--dump-decisions", dump_decisions, "write per-step decision log CSV");
    run->add_flag("--perfect-info", perfect_info, "bypass the estimator (truth-fed law)");
    run->add_option("--out", out_dir, "output directory");

    auto* mc = app.add_subcommand("mc", "Monte Carlo sweep over switch times");
    std::string mc_laws = "dgl1,eadgl1,iets";
    std::string mc_grid = "1.5,1.8,2.1,2.4,2.7";
    int mc_runs = 0;
    std::uint64_t mc_seed = 0;
    int mc_threads = 0;
    bool mc_seed_set = false, mc_runs_set = false;
    mc->add_option("--config", config_path, "scenario config file");
    mc->add_option("--laws", mc_laws, "comma list of laws");
    mc->add_option("--switch-grid", mc_grid, "comma list or start:step:stop");
    mc->add_option("--runs", mc_runs, "runs per switch time")->each([&](const std::string&) {
        mc_runs_set = true;
    });
    mc->add_option("--seed", mc_seed, "master seed")->each([&](const std::string&) {
        mc_seed_set = true;
    });
    mc->add_option("--threads", mc_threads, "worker threads (0 = hardware)");
    mc->add_option("--out", out_dir, "output directory")->required();

    auto* gs = app.add_subcommand("game-space", "singular-region boundary table");
    double t_go_max = 3.0;
    int n_points = 301;
    std::string gs_out = "game_space.csv";
    gs->add_option("--config", config_path, "scenario config file");
    gs->add_option("--t-go-max", t_go_max, "largest time-to-go [s]")->required();
    gs->add_option("--points", n_points, "number of rows")->required();
    gs->add_option("--out", gs_out, "output CSV path");

    CLI11_PARSE(app, argc, argv);

    try {
        const dgl::ScenarioConfig cfg = config_or_default(config_path);

        if (*run) {
            dgl::RunOptions opts;
            opts.perfect_info = perfect_info;
            opts.dump_decisions = dump_decisions;
            opts.dump_cloud = dump_cloud;
            opts.dump_shaping = true;
            const auto rec =
                dgl::run_single(cfg, dgl::law_from_string(run_law), run_switch, run_seed, opts);
            std::filesystem::create_directories(out_dir);
            const std::string base = out_dir + "/" + run_law;
            dgl::write_trajectory_csv(base + "_trajectory.csv", rec);
            if (dump_decisions) dgl::write_decisions_csv(base + "_decisions.csv", rec);
            if (dump_cloud) dgl::write_cloud_csv(base + "_cloud.csv", rec);
            if (!rec.shaping_log.empty()) dgl::write_shaping_csv(base + "_shaping.csv", rec);
            std::printf("law=%s switch_time=%.3f seed=%llu miss=%.4f m%s\n", run_law.c_str(),
                        run_switch, static_cast<unsigned long long>(run_seed), rec.miss,
                        rec.hard_stopped ? " (hard stop)" : "");
            const auto& c = rec.counters;
            if (c.decision_instants > 0)
                std::printf("decisions=%ld fast=%ld (hyp=%ld amb=%ld) full=%ld shaping=%ld\n",
                            c.decision_instants, c.fast_hypothesis + c.fast_ambiguous,
                            c.fast_hypothesis, c.fast_ambiguous, c.full_criterion,
                            c.shaping_invocations);
            return 0;
        }

        if (*mc) {
            const auto laws = parse_laws(mc_laws);
            const auto grid = parse_switch_grid(mc_grid);
            const int runs = mc_runs_set ? mc_runs : cfg.mc_runs;
            const std::uint64_t seed = mc_seed_set ? mc_seed : cfg.master_seed;
            const int threads =
                mc_threads > 0 ? mc_threads : static_cast<int>(std::thread::hardware_concurrency());
            const auto summary = dgl::run_mc(cfg, laws, grid, runs, seed, threads);
            std::filesystem::create_directories(out_dir);
            std::ofstream(out_dir + "/mc_summary.json") << dgl::summary_to_json(summary, true);
            for (const auto& [name, ls] : summary.stats)
                std::printf("%s: pooled P50=%.3f m P95=%.3f m (fast-path %.1f%%)\n", name.c_str(),
                            ls.pooled_p50, ls.pooled_p95,
                            100.0 * (ls.counters.fast_hypothesis + ls.counters.fast_ambiguous) /
                                std::max(1L, ls.counters.fast_attempts));
            if (!summary.failures.empty())
                std::fprintf(stderr, "%zu failed runs recorded\n", summary.failures.size());
            if (summary.aborted) {
                std::fprintf(stderr, "aborted: more than 1%% of runs failed\n");
                return 3;
            }
            return 0;
        }

        if (*gs) {
            const auto rows = dgl::game_space_table(cfg.geometry(), t_go_max, n_points);
            dgl::write_game_space_csv(gs_out, rows);
            std::printf("wrote %zu rows to %s\n", rows.size(), gs_out.c_str());
            return 0;
        }
    } catch (const dgl::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
