#pragma once

#include <string>
#include <vector>

#include "dgl/runner.hpp"
#include "dgl/scenario.hpp"

namespace dgl {

void write_trajectory_csv(const std::string& path, const RunRecord& rec);
void write_decisions_csv(const std::string& path, const RunRecord& rec);
void write_cloud_csv(const std::string& path, const RunRecord& rec);
void write_shaping_csv(const std::string& path, const RunRecord& rec);

struct GameSpaceRow {
    double t_go;
    double upper;  // +z*
    double lower;  // -z*
};

/// Singular-region boundary table on [0, t_go_max] with n_points rows.
std::vector<GameSpaceRow> game_space_table(const GameGeometry& g, double t_go_max, int n_points);

void write_game_space_csv(const std::string& path, const std::vector<GameSpaceRow>& rows);

}  // namespace dgl
