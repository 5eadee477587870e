#pragma once

#include <cmath>

#include "dgl/game_math.hpp"
#include "dgl/scenario.hpp"

namespace dgl::test {

inline GameGeometry nominal_geometry() {
    return ScenarioConfig{}.geometry();
}

inline bool close_rel(double a, double b, double rel, double abs_floor = 0.0) {
    return std::abs(a - b) <= std::max(rel * std::max(std::abs(a), std::abs(b)), abs_floor);
}

}  // namespace dgl::test
