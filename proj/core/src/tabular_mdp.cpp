#include "construal/tabular_mdp.hpp"

#include <cmath>
#include <string>

namespace construal {

std::vector<ConstrualMask> enumerate_construals(int n_obstacles, int max_size) {
  if (n_obstacles < 0 || n_obstacles > 20) {
    throw ComputationError("enumerate_construals: obstacle count " + std::to_string(n_obstacles) +
                           " outside supported range [0, 20]");
  }
  std::vector<ConstrualMask> out;
  const ConstrualMask end = ConstrualMask{1} << n_obstacles;
  for (ConstrualMask c = 0; c < end; ++c) {
    if (max_size >= 0 && construal_size(c) > max_size) continue;
    out.push_back(c);
  }
  return out;
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

RowRef TabularMdp::push_row(std::span<const Transition> entries) {
  RowRef r{static_cast<std::uint32_t>(pool.size()), static_cast<std::uint32_t>(entries.size())};
  pool.insert(pool.end(), entries.begin(), entries.end());
  return r;
}

void TabularMdp::validate(double tol) const {
  const std::size_t sa = static_cast<std::size_t>(num_states) * num_actions;
  if (num_states <= 0 || num_actions <= 0) throw ComputationError("TabularMdp: empty state or action space");
  if (rows.size() != sa) throw ComputationError("TabularMdp: rows size mismatch");
  if (utility.size() != static_cast<std::size_t>(num_states)) throw ComputationError("TabularMdp: utility size mismatch");
  if (terminal.size() != static_cast<std::size_t>(num_states)) throw ComputationError("TabularMdp: terminal size mismatch");
  if (!action_reward.empty() && action_reward.size() != sa) throw ComputationError("TabularMdp: action_reward size mismatch");
  if (!(discount >= 0.0 && discount < 1.0)) {
    throw ComputationError("TabularMdp: discount " + std::to_string(discount) + " outside [0, 1)");
  }
  for (int s = 0; s < num_states; ++s) {
    for (int a = 0; a < num_actions; ++a) {
      double sum = 0.0;
      for (const Transition& t : row(s, a)) {
        if (t.next < 0 || t.next >= num_states) {
          throw ComputationError("TabularMdp: transition target out of range at state " + std::to_string(s));
        }
        if (t.prob < 0.0) {
          throw ComputationError("TabularMdp: negative probability at state " + std::to_string(s) +
                                 " action " + std::to_string(a));
        }
        sum += t.prob;
      }
      if (std::abs(sum - 1.0) > tol) {
        throw ComputationError("TabularMdp: row (" + std::to_string(s) + ", " + std::to_string(a) +
                               ") sums to " + std::to_string(sum));
      }
    }
  }
}

}  // namespace construal
