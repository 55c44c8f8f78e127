#include "construal/heuristic_search.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>
#include <string>

namespace construal {
namespace {

double lookahead(const TabularMdp& mdp, const ValueFunction& v, int s, int a) {
  double acc = 0.0;
  for (const Transition& t : mdp.row(s, a)) acc += t.prob * v[t.next];
  return mdp.utility[s] + mdp.act_reward(s, a) + mdp.discount * acc;
}

struct GreedyRow {
  double best = -std::numeric_limits<double>::infinity();
  std::vector<int> ties;
};

GreedyRow greedy_row(const TabularMdp& mdp, const ValueFunction& v, int s, double tie_tol) {
  GreedyRow g;
  double qs[64];
  for (int a = 0; a < mdp.num_actions; ++a) {
    qs[a] = lookahead(mdp, v, s, a);
    g.best = std::max(g.best, qs[a]);
  }
  for (int a = 0; a < mdp.num_actions; ++a) {
    if (qs[a] >= g.best - tie_tol) g.ties.push_back(a);
  }
  return g;
}

double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

int pick_uniform(const std::vector<int>& options, std::mt19937_64& rng) {
  const auto k = static_cast<std::size_t>(unit_draw(rng) * static_cast<double>(options.size()));
  return options[std::min(k, options.size() - 1)];
}

int pick_successor(std::span<const Transition> row, std::mt19937_64& rng) {
  const double u = unit_draw(rng);
  double acc = 0.0;
  int last = -1;
  for (const Transition& t : row) {
    if (t.prob <= 0.0) continue;
    acc += t.prob;
    last = t.next;
    if (u < acc) return t.next;
  }
  return last;
}

int manhattan(Cell a, Cell b) { return std::abs(a.x - b.x) + std::abs(a.y - b.y); }

// Per-state bitmask of obstacles hit when the state is visited/added.
std::vector<std::uint32_t> hit_masks(const GridMaze& m, const HitPredicate& hit) {
  std::vector<std::uint32_t> masks(static_cast<std::size_t>(m.size()), 0);
  for (int s = 0; s < m.size(); ++s) {
    const Cell visited = m.cell(s);
    for (int i = 0; i < m.num_obstacles(); ++i) {
      for (int oc : m.obstacles[static_cast<std::size_t>(i)]) {
        if (hit(m, m.cell(oc), visited)) {
          masks[static_cast<std::size_t>(s)] |= (1u << i);
          break;
        }
      }
    }
  }
  return masks;
}

}  // namespace

ValueFunction walls_only_heuristic(const GridMaze& m, double slip, double gamma, double vi_tol) {
  const TabularMdp relaxed = compose_construed_mdp(m, 0, slip, gamma);
  return value_iteration(relaxed, vi_tol).v;
}

bool goal_side_adjacent_hit(const GridMaze& m, Cell obstacle_cell, Cell visited) {
  if (manhattan(obstacle_cell, visited) != 1) return false;
  const Cell goal = m.cell(m.goal);
  return manhattan(obstacle_cell, goal) < manhattan(visited, goal);
}

LrtdpRun lrtdp(const TabularMdp& mdp, const ValueFunction& heuristic, int start, double epsilon,
               std::uint64_t seed, int max_trials, int max_trial_steps, double tie_tol) {
  LrtdpRun run;
  run.v = heuristic;
  std::vector<std::uint8_t> solved(static_cast<std::size_t>(mdp.num_states), 0);
  for (int s = 0; s < mdp.num_states; ++s) {
    if (mdp.terminal[s]) {
      solved[static_cast<std::size_t>(s)] = 1;
      run.v[static_cast<std::size_t>(s)] = mdp.utility[s];
    }
  }
  std::mt19937_64 rng(seed);

  // Residual-checked closure walk. Successors of every tied greedy action are
  // followed, so labeling stays valid no matter which tie a trial samples.
  auto check_solved = [&](int root) {
    if (solved[static_cast<std::size_t>(root)]) return true;
    bool ok = true;
    std::vector<int> open{root}, closed;
    std::vector<std::uint8_t> seen(static_cast<std::size_t>(mdp.num_states), 0);
    seen[static_cast<std::size_t>(root)] = 1;
    while (!open.empty()) {
      const int s = open.back();
      open.pop_back();
      closed.push_back(s);
      const GreedyRow g = greedy_row(mdp, run.v, s, tie_tol);
      if (std::abs(g.best - run.v[static_cast<std::size_t>(s)]) > epsilon) {
        ok = false;
        continue;
      }
      for (int a : g.ties) {
        for (const Transition& t : mdp.row(s, a)) {
          if (t.prob <= 0.0 || solved[static_cast<std::size_t>(t.next)] || seen[static_cast<std::size_t>(t.next)])
            continue;
          seen[static_cast<std::size_t>(t.next)] = 1;
          open.push_back(t.next);
        }
      }
    }
    if (ok) {
      for (int s : closed) solved[static_cast<std::size_t>(s)] = 1;
    } else {
      for (auto it = closed.rbegin(); it != closed.rend(); ++it) {
        run.v[static_cast<std::size_t>(*it)] = greedy_row(mdp, run.v, *it, tie_tol).best;
      }
    }
    return ok;
  };

  while (!solved[static_cast<std::size_t>(start)]) {
    if (run.trials >= max_trials) {
      throw ComputationError("lrtdp: start not solved after " + std::to_string(max_trials) + " trials");
    }
    ++run.trials;
    std::vector<int> stack;
    int s = start;
    run.visits.push_back(s);
    int steps = 0;
    while (!solved[static_cast<std::size_t>(s)]) {
      if (++steps > max_trial_steps) {
        throw ComputationError("lrtdp: trial exceeded " + std::to_string(max_trial_steps) + " steps");
      }
      stack.push_back(s);
      const GreedyRow g = greedy_row(mdp, run.v, s, tie_tol);
      run.v[static_cast<std::size_t>(s)] = g.best;
      const int a = pick_uniform(g.ties, rng);
      s = pick_successor(mdp.row(s, a), rng);
      run.visits.push_back(s);
    }
    while (!stack.empty()) {
      const int top = stack.back();
      stack.pop_back();
      if (!check_solved(top)) break;
    }
  }
  run.v_start = run.v[static_cast<std::size_t>(start)];
  return run;
}

LaoRun lao_star(const TabularMdp& mdp, const ValueFunction& heuristic, int start, double epsilon,
                std::uint64_t seed, int max_iters, double tie_tol) {
  LaoRun run;
  run.v = heuristic;
  std::vector<std::uint8_t> in_graph(static_cast<std::size_t>(mdp.num_states), 0);
  std::vector<std::uint8_t> expanded(static_cast<std::size_t>(mdp.num_states), 0);
  for (int s = 0; s < mdp.num_states; ++s) {
    if (mdp.terminal[s]) run.v[static_cast<std::size_t>(s)] = mdp.utility[s];
  }
  in_graph[static_cast<std::size_t>(start)] = 1;
  std::mt19937_64 rng(seed);

  std::vector<int> expansion_order;
  for (int iter = 0; iter < max_iters; ++iter) {
    run.iterations = iter + 1;
    // Reachability under the current greedy partial policy, ties sampled.
    std::vector<std::uint8_t> seen(static_cast<std::size_t>(mdp.num_states), 0);
    std::deque<int> queue{start};
    seen[static_cast<std::size_t>(start)] = 1;
    std::vector<int> tips, solution;
    while (!queue.empty()) {
      const int s = queue.front();
      queue.pop_front();
      if (mdp.terminal[s]) continue;
      if (!expanded[static_cast<std::size_t>(s)]) {
        tips.push_back(s);
        continue;
      }
      solution.push_back(s);
      const GreedyRow g = greedy_row(mdp, run.v, s, tie_tol);
      const int a = pick_uniform(g.ties, rng);
      for (const Transition& t : mdp.row(s, a)) {
        if (t.prob <= 0.0 || seen[static_cast<std::size_t>(t.next)]) continue;
        seen[static_cast<std::size_t>(t.next)] = 1;
        queue.push_back(t.next);
      }
    }

    if (tips.empty()) {
      double residual = 0.0;
      for (int s : solution) {
        residual = std::max(residual,
                            std::abs(greedy_row(mdp, run.v, s, tie_tol).best - run.v[static_cast<std::size_t>(s)]));
      }
      if (residual < epsilon) {
        run.v_start = run.v[static_cast<std::size_t>(start)];
        return run;
      }
    } else {
      for (int s : tips) {
        expanded[static_cast<std::size_t>(s)] = 1;
        expansion_order.push_back(s);
        for (int a = 0; a < mdp.num_actions; ++a) {
          for (const Transition& t : mdp.row(s, a)) {
            if (t.prob <= 0.0 || in_graph[static_cast<std::size_t>(t.next)]) continue;
            in_graph[static_cast<std::size_t>(t.next)] = 1;
            run.added.push_back(t.next);
          }
        }
      }
    }

    // Revalue the expanded region; unexpanded graph states stay at the
    // heuristic, which keeps every stored value an upper bound.
    double residual = std::numeric_limits<double>::infinity();
    while (residual >= epsilon) {
      residual = 0.0;
      for (int s : expansion_order) {
        const double best = greedy_row(mdp, run.v, s, tie_tol).best;
        residual = std::max(residual, std::abs(best - run.v[static_cast<std::size_t>(s)]));
        run.v[static_cast<std::size_t>(s)] = best;
      }
    }
  }
  throw ComputationError("lao_star: no convergence after " + std::to_string(max_iters) + " iterations");
}

namespace {

HitScores run_hit_battery(const GridMaze& m, int n_sims, std::uint64_t seed, double slip, double gamma,
                          double epsilon, const HitPredicate& hit, bool lrtdp_mode) {
  if (n_sims <= 0) throw ComputationError("hit scores: n_sims must be positive");
  const TabularMdp full = full_mdp(m, slip, gamma);
  const ValueFunction h = walls_only_heuristic(m, slip, gamma);
  const std::vector<std::uint32_t> masks = hit_masks(m, hit);
  const int n_obs = m.num_obstacles();

  HitScores out;
  out.scores.assign(static_cast<std::size_t>(n_obs), 0.0);
  std::vector<double> tally(static_cast<std::size_t>(n_obs), 0.0);
  for (int k = 0; k < n_sims; ++k) {
    const std::uint64_t run_seed = mix_seed(seed, static_cast<std::uint64_t>(k));
    const std::vector<int>* states = nullptr;
    LrtdpRun lr;
    LaoRun gr;
    if (lrtdp_mode) {
      lr = lrtdp(full, h, m.start, epsilon, run_seed);
      out.v_start_per_sim.push_back(lr.v_start);
      states = &lr.visits;
    } else {
      gr = lao_star(full, h, m.start, epsilon, run_seed);
      out.v_start_per_sim.push_back(gr.v_start);
      states = &gr.added;
    }
    for (int s : *states) {
      const std::uint32_t mask = masks[static_cast<std::size_t>(s)];
      for (int i = 0; i < n_obs; ++i) {
        if (mask & (1u << i)) tally[static_cast<std::size_t>(i)] += 1.0;
      }
    }
  }
  for (int i = 0; i < n_obs; ++i) {
    const double per_sim = tally[static_cast<std::size_t>(i)] / static_cast<double>(n_sims);
    out.scores[static_cast<std::size_t>(i)] = lrtdp_mode ? std::log(per_sim + 1.0) : per_sim;
  }
  return out;
}

}  // namespace

HitScores lrtdp_hits(const GridMaze& m, int n_sims, std::uint64_t seed, double slip, double gamma,
                     double epsilon, const HitPredicate& hit) {
  return run_hit_battery(m, n_sims, seed, slip, gamma, epsilon, hit, /*lrtdp_mode=*/true);
}

HitScores lao_star_hits(const GridMaze& m, int n_sims, std::uint64_t seed, double slip, double gamma,
                        double epsilon, const HitPredicate& hit) {
  return run_hit_battery(m, n_sims, seed, slip, gamma, epsilon, hit, /*lrtdp_mode=*/false);
}

}  // namespace construal
