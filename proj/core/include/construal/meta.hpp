#pragma once

#include <cstdint>
#include <vector>

#include "construal/construed_task.hpp"
#include "construal/grid_maze.hpp"
#include "construal/solvers.hpp"
#include "construal/types.hpp"

namespace construal {

// Configuration for the construal-switching meta decision process.
struct MetaConfig {
  int max_size = -1;        // candidate construals: all 2^N, or |c| <= max_size when >= 0
  double slip = defaults::kSlip;
  double gamma = defaults::kGamma;

  // Noise model for the within-construal action policies. When action_noise is
  // false each construal acts by its optimal stochastic plan; when true it acts
  // by an eps-softmax of its construed Q.
  bool action_noise = false;
  double action_inv_temp = 1.0;
  double action_eps = 0.0;

  double vi_tol = defaults::kViTol;
  double tie_tol = defaults::kTieTol;
};

// MDP over (cell, construal) pairs. Choosing construal c' at (s, c) moves the
// agent with the true dynamics marginalized over c'-s action policy and costs
// the number of newly attended obstacles; dropping obstacles is free.
struct MetaMdp {
  std::vector<ConstrualMask> construals;  // meta action space, ascending mask order
  int n_base_states = 0;
  int start_state = 0;  // base index of the maze start
  int empty_index = 0;  // position of the empty construal in `construals`
  TabularMdp mdp;       // meta states indexed s * construals.size() + ci

  int index(int s, int ci) const { return s * static_cast<int>(construals.size()) + ci; }
  int start_index() const { return index(start_state, empty_index); }
};

// Assembles the meta MDP from per-construal base policies. base_policies[ci]
// must be a policy over the base MDP's actions; rows for a given (s, c') are
// stored once and aliased across all current construals.
MetaMdp build_meta_mdp_from_policies(const TabularMdp& base, int start_state,
                                     const std::vector<ConstrualMask>& construals,
                                     const std::vector<Policy>& base_policies);

// Convenience wrapper: plans every candidate construal on the maze per config,
// then assembles the meta MDP.
MetaMdp build_meta_mdp(const GridMaze& m, const MetaConfig& cfg = {});

struct MetaSolveResult {
  ValueFunction v;  // per meta state
  QFunction q;      // one-step lookahead of v, switch costs included
  int iterations = 0;
};

// Optimal meta values via Howard policy iteration (exact sparse evaluation).
MetaSolveResult solve_meta(const MetaMdp& meta);

// Softmax construal-switching policy over meta actions:
//   pi(c' | s, c) propto exp{inv_temp * [gamma * sum_s' P(s'|s,c') V(s',c') - C(c',c)]}
// mixed with eps-uniform. Terminal meta states get uniform rows.
Policy construal_switch_policy(const MetaMdp& meta, const MetaSolveResult& solved,
                               double inv_temp = defaults::kSwitchInvTemp, double eps = 0.0);

// Which construal a visit is attributed to: the one held on arrival at the
// state, or the one chosen there for the next move.
enum class Attribution { kInherited, kInUse };

struct OccupancyConfig {
  Attribution attribution = Attribution::kInherited;
  bool include_terminal = true;
  int n_rollouts = defaults::kNRollouts;
  int max_steps = defaults::kRolloutMaxSteps;
  std::uint64_t seed = 0;
};

struct OccupancyResult {
  std::vector<double> rho;     // per meta state, sums to 1
  std::vector<double> visits;  // unnormalized discounted visit weights (mean per rollout)
  // Rollout-only diagnostics; empty/false for the exact computation.
  std::vector<double> visit_se;  // standard error of `visits` per meta state
  std::vector<double> score_se;  // standard error of per-obstacle scores
  int truncated_rollouts = 0;    // rollouts that hit max_steps before a terminal
};

// Exact discounted state-construal occupancy: the successor-representation row
// of (start, empty construal) under `switch_pi`, reattributed per config and
// normalized to sum to 1.
OccupancyResult meta_occupancy_exact(const MetaMdp& meta, const Policy& switch_pi,
                                     const OccupancyConfig& cfg = {});

// Monte Carlo estimate of the same quantity from seeded rollouts. Rollouts that
// hit max_steps are truncated, counted in truncated_rollouts, and kept.
OccupancyResult meta_occupancy_rollout(const MetaMdp& meta, const Policy& switch_pi,
                                       const OccupancyConfig& cfg = {});

// score_i = sum over meta states (s, c) with i in c of rho(s, c).
std::vector<double> obstacle_modification_scores(const MetaMdp& meta, const OccupancyResult& occ);

}  // namespace construal
