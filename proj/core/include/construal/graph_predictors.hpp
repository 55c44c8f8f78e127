#pragma once

#include <vector>

#include "construal/construed_task.hpp"
#include "construal/grid_maze.hpp"
#include "construal/solvers.hpp"
#include "construal/types.hpp"

namespace construal {

// score_i = expected discounted visits, summed over obstacle i's cells, under
// the optimal stochastic policy of the obstacle-free maze (walls kept).
std::vector<double> sr_overlap(const GridMaze& m, double slip = defaults::kSlip,
                               double gamma = defaults::kGamma, double vi_tol = defaults::kViTol,
                               double tie_tol = defaults::kTieTol);

// Which eigenvector of the graph Laplacian L = D - A partitions the state
// space: the Fiedler vector (second-smallest eigenvalue, the standard spectral
// cut) or the literal second-largest convention.
enum class SpectralMode { kFiedler, kSecondLargest };

struct BottleneckResult {
  std::vector<int> bottlenecks;          // endpoints of sign-crossing edges
  std::vector<int> optimal_bottlenecks;  // subset visited by the optimal policy
  std::vector<double> scores;            // per obstacle: min Manhattan to an optimal bottleneck
  std::vector<double> eigenvector;       // per state; zero outside the reachable component
  bool fallback_used = false;            // optimal subset was empty; full set used
};

// Spectral bottleneck analysis over the free cells reachable from the start
// under the true dynamics. Throws ComputationError when the goal is not in the
// start's component.
BottleneckResult bottleneck_distance(const GridMaze& m, SpectralMode mode = SpectralMode::kFiedler,
                                     double slip = defaults::kSlip, double gamma = defaults::kGamma,
                                     double vi_tol = defaults::kViTol, double tie_tol = defaults::kTieTol);

}  // namespace construal
