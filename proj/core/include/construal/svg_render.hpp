#pragma once

// Standalone SVG rendering of a maze with per-obstacle heat colors.

#include <string>
#include <vector>

#include "construal/grid_maze.hpp"

namespace construal {

enum class Normalization {
  kUnit,    // scores are interpreted on [0,1] directly (clamped)
  kMinMax,  // scores are rescaled so min -> 0 and max -> 1
};

// Renders `m` as a self-contained UTF-8 SVG document: walls black, free cells
// white, start marked with a circle, goal with a square, and each obstacle
// filled on a single-hue (blue) ramp driven by its score. `scores` must have
// exactly one entry per obstacle (std::invalid_argument otherwise). Under
// min-max normalization a constant score vector maps every obstacle to the
// ramp midpoint, so equal scores always render as equal colors.
std::string render_heatmap(const GridMaze& m, const std::vector<double>& scores,
                           Normalization norm = Normalization::kUnit);

}  // namespace construal
