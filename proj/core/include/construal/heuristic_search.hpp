#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "construal/construed_task.hpp"
#include "construal/grid_maze.hpp"
#include "construal/solvers.hpp"
#include "construal/types.hpp"

namespace construal {

// Optimal values of the maze with every obstacle removed (walls kept).
// Pointwise >= the true optimal values, so it is an admissible initialization
// for the searches below.
ValueFunction walls_only_heuristic(const GridMaze& m, double slip = defaults::kSlip,
                                   double gamma = defaults::kGamma, double vi_tol = defaults::kViTol);

// A visited state registers a hit on an obstacle when one of the obstacle's
// cells is 4-adjacent to it and strictly closer to the goal (Manhattan).
// Swappable so alternative hit geometries can be studied.
using HitPredicate = std::function<bool(const GridMaze&, Cell obstacle_cell, Cell visited)>;
bool goal_side_adjacent_hit(const GridMaze& m, Cell obstacle_cell, Cell visited);

struct LrtdpRun {
  ValueFunction v;
  double v_start = 0.0;
  int trials = 0;
  std::vector<int> visits;  // every simulated state in trial order, starts included
};

// Labeled RTDP from `start`: greedy trials with uniform random tie-breaking,
// Bellman updates at simulated states, solved-state labeling. Runs until the
// start state is labeled solved. Throws ComputationError at the trial cap.
LrtdpRun lrtdp(const TabularMdp& mdp, const ValueFunction& heuristic, int start,
               double epsilon = 1e-9, std::uint64_t seed = 0, int max_trials = 100000,
               int max_trial_steps = 1000000, double tie_tol = defaults::kTieTol);

struct LaoRun {
  ValueFunction v;
  double v_start = 0.0;
  int iterations = 0;
  std::vector<int> added;  // states first generated during expansion phases (root excluded)
};

// LAO* from `start`: per iteration, expands every unexpanded state reachable
// under the current greedy partial policy (ties sampled uniformly), then
// revalues the expanded region until the Bellman residual drops below epsilon.
// Throws ComputationError at the iteration cap.
LaoRun lao_star(const TabularMdp& mdp, const ValueFunction& heuristic, int start,
                double epsilon = 1e-8, std::uint64_t seed = 0, int max_iters = 100000,
                double tie_tol = defaults::kTieTol);

struct HitScores {
  std::vector<double> scores;         // per obstacle
  std::vector<double> v_start_per_sim;
};

// n_sims independent LRTDP runs on the true task; hits are tallied at every
// simulated visit; score_i = ln(mean per-run hit count + 1).
HitScores lrtdp_hits(const GridMaze& m, int n_sims = defaults::kNSims, std::uint64_t seed = 0,
                     double slip = defaults::kSlip, double gamma = defaults::kGamma,
                     double epsilon = 1e-9, const HitPredicate& hit = goal_side_adjacent_hit);

// n_sims independent LAO* runs; hits are tallied once per state added during
// expansion; score_i = total hits across runs / n_sims.
HitScores lao_star_hits(const GridMaze& m, int n_sims = defaults::kNSims, std::uint64_t seed = 0,
                        double slip = defaults::kSlip, double gamma = defaults::kGamma,
                        double epsilon = 1e-8, const HitPredicate& hit = goal_side_adjacent_hit);

}  // namespace construal
