#include "construal/distances.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "construal/construed_task.hpp"
#include "construal/solvers.hpp"

namespace construal {
namespace {

int manhattan(Cell a, Cell b) { return std::abs(a.x - b.x) + std::abs(a.y - b.y); }

double min_to_cell(const GridMaze& m, const std::vector<int>& obstacle, Cell target) {
  double best = std::numeric_limits<double>::infinity();
  for (int oc : obstacle) best = std::min(best, static_cast<double>(manhattan(m.cell(oc), target)));
  return best;
}

}  // namespace

std::vector<DistanceRecord> distance_predictors(const GridMaze& m, const std::vector<int>* trajectory,
                                                int n_opt_samples, std::uint64_t seed, double slip,
                                                double gamma) {
  if (n_opt_samples <= 0) throw std::invalid_argument("distance_predictors: n_opt_samples must be positive");
  if (trajectory) {
    if (trajectory->empty()) throw std::invalid_argument("distance_predictors: trajectory is empty");
    for (int s : *trajectory) {
      if (s < 0 || s >= m.size()) throw std::invalid_argument("distance_predictors: trajectory state out of bounds");
    }
  }

  std::vector<int> wall_cells;
  for (int s = 0; s < m.size(); ++s) {
    if (m.wall[static_cast<std::size_t>(s)]) wall_cells.push_back(s);
  }
  const Cell center{(m.width - 1) / 2, (m.height - 1) / 2};

  // One shared battery of optimal-policy rollouts serves every obstacle.
  const TabularMdp full = full_mdp(m, slip, gamma);
  const ValueIterationResult vi = value_iteration(full);
  const Policy pi = optimal_stochastic_policy(vi.q, full);
  std::vector<std::vector<int>> samples;
  samples.reserve(static_cast<std::size_t>(n_opt_samples));
  for (int k = 0; k < n_opt_samples; ++k) {
    samples.push_back(
        sample_trajectory(full, pi, m.start, mix_seed(seed, static_cast<std::uint64_t>(k))).states);
  }

  std::vector<DistanceRecord> out(static_cast<std::size_t>(m.num_obstacles()));
  for (int i = 0; i < m.num_obstacles(); ++i) {
    const std::vector<int>& obs = m.obstacles[static_cast<std::size_t>(i)];
    DistanceRecord& rec = out[static_cast<std::size_t>(i)];
    rec.start_dist = min_to_cell(m, obs, m.cell(m.start));
    rec.goal_dist = min_to_cell(m, obs, m.cell(m.goal));
    rec.center_dist = min_to_cell(m, obs, center);

    double wall_best = static_cast<double>(m.width + m.height);  // sentinel: no walls anywhere
    for (int wc : wall_cells) wall_best = std::min(wall_best, min_to_cell(m, obs, m.cell(wc)));
    rec.wall_dist = wall_best;

    double opt_sum = 0.0;
    for (const std::vector<int>& states : samples) {
      double best = std::numeric_limits<double>::infinity();
      for (int s : states) best = std::min(best, min_to_cell(m, obs, m.cell(s)));
      opt_sum += best;
    }
    rec.opt_dist = opt_sum / static_cast<double>(n_opt_samples);

    if (trajectory) {
      double best = std::numeric_limits<double>::infinity();
      int best_step = 0;
      for (std::size_t t = 0; t < trajectory->size(); ++t) {
        const double d = min_to_cell(m, obs, m.cell((*trajectory)[t]));
        if (d < best) {
          best = d;
          best_step = static_cast<int>(t);
        }
      }
      rec.nav_dist = best;
      rec.nav_dist_step = static_cast<double>(best_step);
    }
  }
  return out;
}

}  // namespace construal
