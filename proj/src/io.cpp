#include "dgl/io.hpp"

#include <cstdio>
#include <stdexcept>

namespace dgl {

namespace {

struct File {
    std::FILE* f;
    explicit File(const std::string& path) : f(std::fopen(path.c_str(), "w")) {
        if (!f) throw std::runtime_error("cannot open for writing: " + path);
    }
    ~File() { std::fclose(f); }
    File(const File&) = delete;
    File& operator=(const File&) = delete;
};

}  // namespace

void write_trajectory_csv(const std::string& path, const RunRecord& rec) {
    File out(path);
    std::fprintf(out.f,
                 "t,x_m,y_m,x_t,y_t,rho,lambda,z_true,z_est,t_go_true,t_go_est,u_m,"
                 "mode_true,hypothesis_chosen,fast_path_used\n");
    for (const auto& s : rec.steps)
        std::fprintf(out.f,
                     "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                     "%d,%d,%d\n",
                     s.t, s.x_m, s.y_m, s.x_t, s.y_t, s.rho, s.lambda, s.z_true, s.z_est,
                     s.t_go_true, s.t_go_est, s.u_m, s.mode_true, s.hypothesis_chosen,
                     s.fast_path_used ? 1 : 0);
}

void write_decisions_csv(const std::string& path, const RunRecord& rec) {
    File out(path);
    std::fprintf(out.f,
                 "t,like_1,like_2,like_3,like_4,prior_1,prior_2,prior_3,prior_4,"
                 "risk_1,risk_2,risk_3,risk_4,outcome,fast_path,true_hypothesis\n");
    for (const auto& d : rec.decisions)
        std::fprintf(out.f,
                     "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                     "%.17g,%d,%d,%d\n",
                     d.t, d.likelihood(0), d.likelihood(1), d.likelihood(2), d.likelihood(3),
                     d.prior(0), d.prior(1), d.prior(2), d.prior(3), d.risk(0), d.risk(1),
                     d.risk(2), d.risk(3), d.outcome, d.fast_path ? 1 : 0, d.true_hypothesis);
}

void write_cloud_csv(const std::string& path, const RunRecord& rec) {
    File out(path);
    std::fprintf(out.f, "t,index,mode,weight,t_go,z,lambda,gamma_t\n");
    for (const auto& c : rec.cloud_dump)
        std::fprintf(out.f, "%.17g,%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g\n", c.t, c.index, c.mode,
                     c.weight, c.t_go, c.z, c.lambda, c.gamma_t);
}

void write_shaping_csv(const std::string& path, const RunRecord& rec) {
    File out(path);
    std::fprintf(out.f, "t,candidate,det_sigma11,admissible,selected\n");
    for (const auto& r : rec.shaping_log)
        std::fprintf(out.f, "%.17g,%.17g,%.17g,%d,%d\n", r.t, r.row.candidate, r.row.det_sigma11,
                     r.row.admissible ? 1 : 0, r.row.selected ? 1 : 0);
}

std::vector<GameSpaceRow> game_space_table(const GameGeometry& g, double t_go_max, int n_points) {
    if (n_points < 2) throw std::invalid_argument("game_space_table: n_points < 2");
    if (t_go_max <= 0.0) throw std::invalid_argument("game_space_table: t_go_max <= 0");
    std::vector<GameSpaceRow> rows;
    rows.reserve(static_cast<std::size_t>(n_points));
    for (int i = 0; i < n_points; ++i) {
        const double t_go = t_go_max * i / (n_points - 1);
        const double zs = singular_boundary(t_go, g);
        rows.push_back({t_go, zs, -zs});
    }
    return rows;
}

void write_game_space_csv(const std::string& path, const std::vector<GameSpaceRow>& rows) {
    File out(path);
    std::fprintf(out.f, "t_go,boundary_upper,boundary_lower\n");
    for (const auto& r : rows)
        std::fprintf(out.f, "%.17g,%.17g,%.17g\n", r.t_go, r.upper, r.lower);
}

}  // namespace dgl
