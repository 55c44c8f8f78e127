#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "construal/grid_maze.hpp"
#include "construal/types.hpp"

namespace construal {

struct DistanceRecord {
  double start_dist = 0.0;
  double goal_dist = 0.0;
  double wall_dist = 0.0;    // width + height when the maze has no wall cells
  double center_dist = 0.0;  // to cell ((w-1)/2, (h-1)/2), floor division
  double opt_dist = 0.0;     // mean over sampled optimal trajectories of the min distance
  std::optional<double> nav_dist;       // only when a navigation trajectory is supplied
  std::optional<double> nav_dist_step;  // earliest timestep achieving nav_dist
};

// Per-obstacle Manhattan landmark distances, each minimized over the
// obstacle's cells. opt_dist averages n_opt_samples seeded rollouts of the
// true optimal stochastic policy from the start.
std::vector<DistanceRecord> distance_predictors(const GridMaze& m,
                                                const std::vector<int>* trajectory = nullptr,
                                                int n_opt_samples = 100, std::uint64_t seed = 0,
                                                double slip = defaults::kSlip,
                                                double gamma = defaults::kGamma);

}  // namespace construal
