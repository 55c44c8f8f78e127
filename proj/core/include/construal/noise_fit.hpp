#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "construal/grid_maze.hpp"
#include "construal/meta.hpp"
#include "construal/predictor_table.hpp"
#include "construal/types.hpp"

namespace construal {

struct NoiseParams {
  double action_inv_temp = 1.0;
  double action_eps = 0.0;
  double switch_inv_temp = 1.0;
  double switch_eps = 0.0;
};

// Default grid: 4 x 3 x 5 x 5 = 300 points. points() iterates action_inv_temp
// outermost and switch_eps innermost; fit ties break toward the earlier point.
struct ParamGrid {
  std::vector<double> action_inv_temps{1.0, 3.0, 5.0, 7.0};
  std::vector<double> action_epss{0.0, 0.1, 0.2};
  std::vector<double> switch_inv_temps{1.0, 3.0, 5.0, 7.0, 9.0};
  std::vector<double> switch_epss{0.0, 0.05, 0.1, 0.2, 0.3};

  std::vector<NoiseParams> points() const;
};

struct FitConfig {
  int max_size = 3;  // candidate construals capped at this cardinality
  int n_rollouts = defaults::kNRollouts;
  int max_steps = defaults::kRolloutMaxSteps;
  std::uint64_t seed = 0;  // rollout streams depend on (seed, maze index) only
  double slip = defaults::kSlip;
  double gamma = defaults::kGamma;
  Attribution attribution = Attribution::kInherited;
  bool include_terminal = true;
  double vi_tol = defaults::kViTol;
  double tie_tol = defaults::kTieTol;
  std::string measure;  // restrict to this response measure; empty = use all rows
};

// Forward model of the fit: per-obstacle modification scores for one maze at
// one noise setting (size-capped candidates, eps-softmax action policies,
// rollout occupancy). maze_seed must be the stream for this maze.
std::vector<double> modification_scores_at(const GridMaze& m, const NoiseParams& params,
                                           const FitConfig& cfg, std::uint64_t maze_seed);

struct FitResult {
  NoiseParams best;
  double best_r2 = 0.0;
  int best_index = 0;           // into ParamGrid::points()
  std::vector<double> grid_r2;  // pooled R-squared per grid point
};

// Grid search: at every grid point, computes scores for every maze, pools all
// (score, response) pairs matched by (maze_id, obstacle_id), and returns the
// point with the highest simple-OLS R-squared. Zero score variance at a point
// yields R-squared 0 there. Throws when a response row matches no maze.
FitResult fit_noise_params(const std::vector<NamedMaze>& mazes, const ResponseTable& responses,
                           const ParamGrid& grid = {}, const FitConfig& cfg = {});

// Synthetic responses: the forward model at `params` plus Gaussian noise of
// standard deviation noise_sd (seeded, implementation-independent draws).
ResponseTable generate_synthetic_responses(const std::vector<NamedMaze>& mazes,
                                           const NoiseParams& params, const FitConfig& cfg,
                                           double noise_sd, std::uint64_t noise_seed,
                                           const std::string& measure = "modification");

}  // namespace construal
