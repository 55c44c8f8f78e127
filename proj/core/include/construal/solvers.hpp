#pragma once

#include <cstdint>
#include <vector>

#include "construal/tabular_mdp.hpp"
#include "construal/types.hpp"

namespace construal {

struct ValueIterationResult {
  ValueFunction v;
  QFunction q;
  int iterations = 0;
  double residual = 0.0;
};

// In-place sweeps until the successive max-norm residual drops below tol.
// Throws ComputationError naming the residual if max_iters is exhausted.
ValueIterationResult value_iteration(const TabularMdp& mdp, double tol = 1e-10, int max_iters = 1000000);

// Exact V^pi by solving (I - discount * P_pi) V = r_pi. Terminal states keep
// V = utility. Direct sparse factorization below iterative_threshold states,
// BiCGSTAB above it. Throws ComputationError on a singular system.
ValueFunction policy_evaluation_exact(const TabularMdp& mdp, const Policy& pi,
                                      int iterative_threshold = 50000, double iterative_tol = 1e-10);

// Uniform distribution over actions whose Q is within tie_tol of the row max.
// Terminal states get a uniform row: no action matters there.
Policy optimal_stochastic_policy(const QFunction& q, const TabularMdp& mdp, double tie_tol = 1e-8);

// eps/A + (1 - eps) * softmax(inv_temp * Q), computed with row-max subtraction.
Policy eps_softmax_policy(const QFunction& q, double inv_temp, double eps);

// One-step lookahead Q for a given V. Terminal rows are pinned to the state's
// utility so downstream softmax/greedy rows come out uniform there.
QFunction q_from_v(const TabularMdp& mdp, const ValueFunction& v);

struct PolicyIterationResult {
  Policy pi;  // deterministic rows
  ValueFunction v;
  int iterations = 0;
};

// Howard policy iteration: exact sparse evaluation plus greedy improvement with
// lowest-index tie-breaking. Deterministic for a given MDP.
PolicyIterationResult policy_iteration_sparse(const TabularMdp& mdp, int max_iters = 10000);

// Discounted successor representation M = (I - discount * P_pi)^{-1} where
// terminal rows of P_pi are zeroed, so terminal rows of M are self-indicators.
// Dense; refuses state spaces above 4096 (use successor_row for those).
Matrix successor_representation(const TabularMdp& mdp, const Policy& pi);

// One row of the successor representation: expected discounted visit counts
// started from `start`. Computed via a single sparse transposed solve.
ValueFunction successor_row(const TabularMdp& mdp, const Policy& pi, int start);

struct Trajectory {
  std::vector<int> states;   // always one longer than actions
  std::vector<int> actions;
};

// Seeded rollout following pi until a terminal state is appended or max_steps
// actions have been taken. A terminal start yields a length-1 state sequence.
Trajectory sample_trajectory(const TabularMdp& mdp, const Policy& pi, int start,
                             std::uint64_t seed, int max_steps = 10000);

}  // namespace construal
