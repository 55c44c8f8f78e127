#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "construal/types.hpp"

namespace construal {

struct Transition {
  std::int32_t next;
  double prob;
};

// Half-open range into TabularMdp::pool. Rows may alias: several (state, action)
// pairs can share one stored distribution, which keeps large derived MDPs small.
struct RowRef {
  std::uint32_t begin = 0;
  std::uint32_t len = 0;
};

// Finite MDP with per-state utility, optional per-(state, action) reward addend,
// and absorbing terminal states. Terminal states accrue their utility once and
// then stop; solvers treat their continuation value as zero.
struct TabularMdp {
  int num_states = 0;
  int num_actions = 0;
  double discount = 0.99;
  std::vector<Transition> pool;
  std::vector<RowRef> rows;           // num_states * num_actions entries
  std::vector<double> utility;        // per state
  std::vector<std::uint8_t> terminal; // per state
  std::vector<double> action_reward;  // empty, or num_states * num_actions

  std::span<const Transition> row(int s, int a) const {
    const RowRef r = rows[static_cast<std::size_t>(s) * num_actions + a];
    return {pool.data() + r.begin, r.len};
  }

  double act_reward(int s, int a) const {
    return action_reward.empty() ? 0.0 : action_reward[static_cast<std::size_t>(s) * num_actions + a];
  }

  // Appends a distribution to the pool and returns its RowRef.
  RowRef push_row(std::span<const Transition> entries);

  // Throws ComputationError unless every row is a probability distribution
  // (within tol), indices are in range, and the shape fields are consistent.
  void validate(double tol = 1e-12) const;
};

}  // namespace construal
