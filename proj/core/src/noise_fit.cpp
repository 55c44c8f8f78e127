#include "construal/noise_fit.hpp"

#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

#include "construal/construed_task.hpp"
#include "construal/solvers.hpp"

namespace construal {

std::vector<NoiseParams> ParamGrid::points() const {
  std::vector<NoiseParams> out;
  for (double ait : action_inv_temps)
    for (double aeps : action_epss)
      for (double sit : switch_inv_temps)
        for (double seps : switch_epss) out.push_back({ait, aeps, sit, seps});
  return out;
}

namespace {

// Per-maze state that is independent of the noise grid point.
struct MazeCache {
  TabularMdp base;
  int start = 0;
  std::vector<ConstrualMask> candidates;
  std::vector<QFunction> construed_q;
};

MazeCache build_cache(const GridMaze& m, const FitConfig& cfg) {
  MazeCache cache;
  cache.base = full_mdp(m, cfg.slip, cfg.gamma);
  cache.start = m.start;
  cache.candidates = enumerate_construals(m.num_obstacles(), cfg.max_size);
  cache.construed_q.reserve(cache.candidates.size());
  for (ConstrualMask c : cache.candidates) {
    const TabularMdp construed = compose_construed_mdp(m, c, cfg.slip, cfg.gamma);
    cache.construed_q.push_back(value_iteration(construed, cfg.vi_tol).q);
  }
  return cache;
}

std::vector<double> scores_for(const MetaMdp& meta, const MetaSolveResult& solved,
                               double switch_inv_temp, double switch_eps, const FitConfig& cfg,
                               std::uint64_t maze_seed) {
  const Policy swpi = construal_switch_policy(meta, solved, switch_inv_temp, switch_eps);
  OccupancyConfig occfg;
  occfg.attribution = cfg.attribution;
  occfg.include_terminal = cfg.include_terminal;
  occfg.n_rollouts = cfg.n_rollouts;
  occfg.max_steps = cfg.max_steps;
  occfg.seed = maze_seed;
  const OccupancyResult occ = meta_occupancy_rollout(meta, swpi, occfg);
  return obstacle_modification_scores(meta, occ);
}

MetaMdp meta_for_action_params(const MazeCache& cache, double action_inv_temp, double action_eps) {
  std::vector<Policy> policies;
  policies.reserve(cache.construed_q.size());
  for (const QFunction& q : cache.construed_q) {
    policies.push_back(eps_softmax_policy(q, action_inv_temp, action_eps));
  }
  return build_meta_mdp_from_policies(cache.base, cache.start, cache.candidates, policies);
}

double pooled_r2(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) return 0.0;  // degenerate point: no explanatory power
  const double r2 = (sxy * sxy) / (sxx * syy);
  return std::min(1.0, std::max(0.0, r2));
}

// Implementation-independent Gaussian draw (Box-Muller on 53-bit uniforms).
double gaussian(std::mt19937_64& rng) {
  const double u1 = 1.0 - static_cast<double>(rng() >> 11) * 0x1.0p-53;  // (0, 1]
  const double u2 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

}  // namespace

std::vector<double> modification_scores_at(const GridMaze& m, const NoiseParams& params,
                                           const FitConfig& cfg, std::uint64_t maze_seed) {
  const MazeCache cache = build_cache(m, cfg);
  const MetaMdp meta = meta_for_action_params(cache, params.action_inv_temp, params.action_eps);
  const MetaSolveResult solved = solve_meta(meta);
  return scores_for(meta, solved, params.switch_inv_temp, params.switch_eps, cfg, maze_seed);
}

FitResult fit_noise_params(const std::vector<NamedMaze>& mazes, const ResponseTable& responses,
                           const ParamGrid& grid, const FitConfig& cfg) {
  if (mazes.empty()) throw std::invalid_argument("fit_noise_params: no mazes");
  const std::vector<NoiseParams> points = grid.points();
  if (points.empty()) throw std::invalid_argument("fit_noise_params: empty grid");

  // Response rows resolved to (maze index, obstacle id) once, up front.
  std::map<std::string, std::size_t> maze_index;
  for (std::size_t i = 0; i < mazes.size(); ++i) maze_index[mazes[i].id] = i;
  struct Pair {
    std::size_t maze = 0;
    int obstacle = 0;
    double response = 0.0;
  };
  std::vector<Pair> pairs;
  for (const ResponseRow& r : responses) {
    if (!cfg.measure.empty() && r.measure != cfg.measure) continue;
    const auto it = maze_index.find(r.maze_id);
    if (it == maze_index.end()) {
      throw std::invalid_argument("fit_noise_params: response references unknown maze '" + r.maze_id + "'");
    }
    const int n_obs = mazes[it->second].maze.num_obstacles();
    if (r.obstacle_id < 0 || r.obstacle_id >= n_obs) {
      throw std::invalid_argument("fit_noise_params: response references obstacle " +
                                  std::to_string(r.obstacle_id) + " outside maze '" + r.maze_id + "'");
    }
    pairs.push_back({it->second, r.obstacle_id, r.mean_response});
  }
  if (pairs.size() < 3) throw std::invalid_argument("fit_noise_params: need at least 3 matched responses");

  // scores[point][maze][obstacle]
  std::vector<std::vector<std::vector<double>>> scores(
      points.size(), std::vector<std::vector<double>>(mazes.size()));
  for (std::size_t mi = 0; mi < mazes.size(); ++mi) {
    const MazeCache cache = build_cache(mazes[mi].maze, cfg);
    const std::uint64_t maze_seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(mi));
    std::size_t point = 0;
    for (double ait : grid.action_inv_temps) {
      for (double aeps : grid.action_epss) {
        const MetaMdp meta = meta_for_action_params(cache, ait, aeps);
        const MetaSolveResult solved = solve_meta(meta);
        for (double sit : grid.switch_inv_temps) {
          for (double seps : grid.switch_epss) {
            scores[point][mi] = scores_for(meta, solved, sit, seps, cfg, maze_seed);
            ++point;
          }
        }
      }
    }
  }

  FitResult out;
  out.grid_r2.resize(points.size());
  out.best_index = 0;
  out.best_r2 = -1.0;
  std::vector<double> x(pairs.size()), y(pairs.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      x[i] = scores[p][pairs[i].maze][static_cast<std::size_t>(pairs[i].obstacle)];
      y[i] = pairs[i].response;
    }
    out.grid_r2[p] = pooled_r2(x, y);
    if (out.grid_r2[p] > out.best_r2) {
      out.best_r2 = out.grid_r2[p];
      out.best_index = static_cast<int>(p);
    }
  }
  out.best = points[static_cast<std::size_t>(out.best_index)];
  return out;
}

ResponseTable generate_synthetic_responses(const std::vector<NamedMaze>& mazes,
                                           const NoiseParams& params, const FitConfig& cfg,
                                           double noise_sd, std::uint64_t noise_seed,
                                           const std::string& measure) {
  if (noise_sd < 0.0) throw std::invalid_argument("generate_synthetic_responses: negative noise_sd");
  std::mt19937_64 rng(noise_seed);
  ResponseTable out;
  for (std::size_t mi = 0; mi < mazes.size(); ++mi) {
    const std::vector<double> scores =
        modification_scores_at(mazes[mi].maze, params, cfg,
                               mix_seed(cfg.seed, static_cast<std::uint64_t>(mi)));
    for (std::size_t ob = 0; ob < scores.size(); ++ob) {
      ResponseRow row;
      row.maze_id = mazes[mi].id;
      row.obstacle_id = static_cast<int>(ob);
      row.measure = measure;
      row.mean_response = scores[ob] + (noise_sd > 0.0 ? noise_sd * gaussian(rng) : 0.0);
      out.push_back(std::move(row));
    }
  }
  return out;
}

}  // namespace construal
