// Release acceptance gate. Runs the ten blocking checks end to end against the
// shipped fixtures and prints exactly one [PASS]/[FAIL] line per criterion.
//
// Usage: construal_acceptance <fixtures_dir> <cli_binary>
//
// Exit status 0 only when every criterion holds.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "construal/analysis.hpp"
#include "construal/construed_task.hpp"
#include "construal/distances.hpp"
#include "construal/graph_predictors.hpp"
#include "construal/grid_maze.hpp"
#include "construal/heuristic_search.hpp"
#include "construal/meta.hpp"
#include "construal/noise_fit.hpp"
#include "construal/predictor_table.hpp"
#include "construal/solvers.hpp"
#include "construal/types.hpp"
#include "construal/vor.hpp"
#include "oracle/dense_oracle.hpp"

using namespace construal;

namespace {

std::string g_fixtures;
std::string g_cli;

GridMaze load(const std::string& name) {
  const std::string path = g_fixtures + "/" + name + ".maze";
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ComputationError("cannot open fixture " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_maze(ss.str());
}

std::vector<std::string> big_names() {
  std::vector<std::string> names;
  for (int i = 0; i < 12; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "maze-%02d", i);
    names.emplace_back(buf);
  }
  for (int i = 0; i < 4; ++i) names.push_back("crit-" + std::to_string(i));
  return names;
}

std::vector<std::string> all_names() {
  std::vector<std::string> names{"tiny3", "tiny-ob", "routes5", "deadend5", "rooms7x3"};
  for (auto& n : big_names()) names.push_back(n);
  return names;
}

struct Stopwatch {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

std::string num(double x, const char* fmt = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, x);
  return buf;
}

// Plan-quality tables computed once in criterion 2 and reused by 3 and 4.
// Only the value fields are kept; plans are not needed downstream.
std::vector<std::pair<std::string, VorTable>> g_value_tables;

const VorTable* find_table(const std::string& name) {
  for (const auto& [n, t] : g_value_tables) {
    if (n == name) return &t;
  }
  return nullptr;
}

int g_passed = 0;
int g_failed = 0;

void run_criterion(int idx, const std::string& what,
                   const std::function<std::pair<bool, std::string>()>& body) {
  bool ok = false;
  std::string detail;
  try {
    std::tie(ok, detail) = body();
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("exception: ") + e.what();
  }
  std::printf("[%s] criterion %d: %s -- %s\n", ok ? "PASS" : "FAIL", idx, what.c_str(),
              detail.c_str());
  std::fflush(stdout);
  (ok ? g_passed : g_failed) += 1;
}

// ---------------------------------------------------------------------------
// 1. Plan-value table against the independent dense brute-force oracle.
// ---------------------------------------------------------------------------
std::pair<bool, std::string> criterion1() {
  Stopwatch sw;
  double max_diff = 0.0;
  for (const std::string& name : {std::string("tiny-ob"), std::string("routes5")}) {
    const GridMaze m = load(name);
    const VorTable ours = vor_table(m);
    const auto ref = oracle::vor_table(m);
    if (ours.records.size() != ref.size()) {
      return {false, name + ": table sizes differ (" + std::to_string(ours.records.size()) +
                         " vs " + std::to_string(ref.size()) + ")"};
    }
    for (std::size_t i = 0; i < ref.size(); ++i) {
      if (ours.records[i].mask != ref[i].mask) {
        return {false, name + ": construal order differs at entry " + std::to_string(i)};
      }
      max_diff = std::max(max_diff,
                          std::abs(ours.records[i].behavioral_utility - ref[i].behavioral_utility));
      max_diff = std::max(max_diff, std::abs(ours.records[i].vor - ref[i].vor));
    }
  }
  const double t = sw.seconds();
  const bool ok = max_diff <= 1e-9 && t < 1.0;
  return {ok, "independently coded dense enumeration oracle, max |diff| = " + num(max_diff) +
                  " (tol 1e-9), " + num(t, "%.2f") + "s (budget 1s)"};
}

// ---------------------------------------------------------------------------
// 2. Dominance over all 128 construals of all sixteen 11x11 fixtures.
// ---------------------------------------------------------------------------
std::pair<bool, std::string> criterion2() {
  Stopwatch sw;
  double worst_bu_margin = 1e300;   // min over (bu_full - bu_c)
  double worst_val_margin = 1e300;  // min over (v_c - v_full)
  for (const std::string& name : big_names()) {
    const GridMaze m = load(name);
    const int n_obs = m.num_obstacles();
    const ConstrualMask full_mask = (ConstrualMask{1} << n_obs) - 1;
    const TabularMdp full = full_mdp(m);

    VorTable table;
    table.n_obstacles = n_obs;
    std::vector<double> construed_v;
    for (ConstrualMask c = 0;; ++c) {
      const TabularMdp construed = compose_construed_mdp(m, c);
      const ValueIterationResult vi = value_iteration(construed, 1e-12);
      const Policy pol = optimal_stochastic_policy(vi.q, construed);
      const double bu = policy_evaluation_exact(full, pol)[static_cast<std::size_t>(m.start)];
      VorRecord rec;
      rec.mask = c;
      rec.behavioral_utility = bu;
      rec.cost = construal_size(c);
      rec.vor = bu - rec.cost;
      table.records.push_back(std::move(rec));
      construed_v.push_back(vi.v[static_cast<std::size_t>(m.start)]);
      if (c == full_mask) break;
    }
    const double bu_full = table.records.back().behavioral_utility;
    const double v_full = construed_v.back();
    for (std::size_t i = 0; i < table.records.size(); ++i) {
      worst_bu_margin = std::min(worst_bu_margin, bu_full - table.records[i].behavioral_utility);
      worst_val_margin = std::min(worst_val_margin, construed_v[i] - v_full);
    }
    g_value_tables.emplace_back(name, std::move(table));
  }
  const double t = sw.seconds();
  const bool ok = worst_bu_margin >= -1e-9 && worst_val_margin >= -1e-9 && t < 60.0;
  return {ok, "16 mazes x 128 construals: min(U(pi_full) - U(pi_c)) = " + num(worst_bu_margin) +
                  ", min(V*_c - V*_full at start) = " + num(worst_val_margin) +
                  " (both >= -1e-9), " + num(t, "%.1f") + "s single-threaded (budget 60s)"};
}

// ---------------------------------------------------------------------------
// 3. Probability hygiene: normalization, ranges, softmax shift invariance.
// ---------------------------------------------------------------------------
std::pair<bool, std::string> criterion3() {
  double worst_sum_err = 0.0;
  double worst_shift_err = 0.0;
  bool ranges_ok = true;
  int tables = 0;
  for (const std::string& name : all_names()) {
    const GridMaze m = load(name);
    VorTable local;
    const VorTable* table = find_table(name);
    if (table == nullptr) {
      local = vor_table(m);
      table = &local;
    }
    const auto dist = construal_distribution(*table);
    worst_sum_err = std::max(
        worst_sum_err, std::abs(std::accumulate(dist.begin(), dist.end(), 0.0) - 1.0));
    for (double p : dist) ranges_ok = ranges_ok && p >= 0.0 && p <= 1.0;
    for (double p : obstacle_marginals(*table, dist)) {
      ranges_ok = ranges_ok && p >= 0.0 && p <= 1.0;
    }

    VorTable shifted = *table;
    for (auto& rec : shifted.records) rec.vor += 137.25;
    const auto dist2 = construal_distribution(shifted);
    for (std::size_t i = 0; i < dist.size(); ++i) {
      worst_shift_err = std::max(worst_shift_err, std::abs(dist2[i] - dist[i]));
    }
    ++tables;
  }

  bool scores_ok = true;
  for (const std::string& name :
       {std::string("tiny-ob"), std::string("routes5"), std::string("deadend5"),
        std::string("rooms7x3")}) {
    const MetaMdp meta = build_meta_mdp(load(name));
    const MetaSolveResult solved = solve_meta(meta);
    const Policy swpi = construal_switch_policy(meta, solved);
    const OccupancyResult occ = meta_occupancy_exact(meta, swpi);
    worst_sum_err = std::max(
        worst_sum_err, std::abs(std::accumulate(occ.rho.begin(), occ.rho.end(), 0.0) - 1.0));
    for (double s : obstacle_modification_scores(meta, occ)) {
      scores_ok = scores_ok && s >= 0.0 && s <= 1.0;
    }
  }

  const bool ok = worst_sum_err <= 1e-12 && worst_shift_err <= 1e-12 && ranges_ok && scores_ok;
  return {ok, std::to_string(tables) + " construal distributions + 4 occupancy vectors: max |sum - 1| = " +
                  num(worst_sum_err) + ", max softmax shift drift = " + num(worst_shift_err) +
                  " (tol 1e-12), all marginals/scores in [0,1]: " +
                  ((ranges_ok && scores_ok) ? "yes" : "no")};
}

// ---------------------------------------------------------------------------
// 4. Relevance beats proximity on the designed layout, deterministically.
// ---------------------------------------------------------------------------
std::pair<bool, std::string> criterion4() {
  const GridMaze m = load("crit-0");
  const VorTable t1 = vor_table(m);
  const VorTable t2 = vor_table(m);
  const auto marg1 = obstacle_marginals(t1, construal_distribution(t1));
  const auto marg2 = obstacle_marginals(t2, construal_distribution(t2));
  const bool deterministic = marg1 == marg2;

  // Obstacle 0 blocks the only fast detour but sits far away; obstacle 1 is
  // adjacent to the start but never matters.
  const double gap = marg1[0] - marg1[1];
  const auto recs = distance_predictors(m);
  const auto recs2 = distance_predictors(m);
  const bool dist_deterministic =
      recs[0].opt_dist == recs2[0].opt_dist && recs[1].opt_dist == recs2[1].opt_dist;
  const bool opposite = recs[0].start_dist > recs[1].start_dist &&
                        recs[0].goal_dist > recs[1].goal_dist &&
                        recs[0].opt_dist > recs[1].opt_dist;

  const bool ok = gap >= 0.1 && opposite && deterministic && dist_deterministic;
  return {ok, "attention marginal gap (relevant-far minus irrelevant-near) = " + num(gap) +
                  " (need >= 0.1); start/goal/path distances all rank the other way: " +
                  (opposite ? "yes" : "no") + "; repeat runs identical: " +
                  ((deterministic && dist_deterministic) ? "yes" : "no")};
}

// ---------------------------------------------------------------------------
// 5. Heuristic searches converge to the optimum; admissibility; empty hits.
// ---------------------------------------------------------------------------
std::pair<bool, std::string> criterion5() {
  Stopwatch sw;
  double worst_gap = 0.0;
  bool admissible = true;
  for (const std::string& name : all_names()) {
    const GridMaze m = load(name);
    const TabularMdp mdp = full_mdp(m);
    const ValueFunction h = walls_only_heuristic(m);
    const ValueIterationResult vi = value_iteration(mdp);
    for (int s = 0; s < mdp.num_states; ++s) {
      admissible = admissible && h[static_cast<std::size_t>(s)] >=
                                     vi.v[static_cast<std::size_t>(s)] - 1e-9;
    }
    const double v_star = vi.v[static_cast<std::size_t>(m.start)];
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      worst_gap = std::max(worst_gap, std::abs(lrtdp(mdp, h, m.start, 1e-9, seed).v_start - v_star));
      worst_gap =
          std::max(worst_gap, std::abs(lao_star(mdp, h, m.start, 1e-8, seed).v_start - v_star));
    }
  }

  bool empty_ok = true;
  for (const GridMaze& m : {load("tiny3"), strip_obstacles(load("routes5")),
                            strip_obstacles(load("crit-0"))}) {
    empty_ok = empty_ok && lrtdp_hits(m, 20, 0).scores.empty() &&
               lao_star_hits(m, 20, 0).scores.empty();
  }

  const double t = sw.seconds();
  const bool ok = worst_gap <= 1e-6 && admissible && empty_ok && t < 120.0;
  return {ok, "21 mazes x 20 seeds x {trial-based, expansion-based}: max |v_start - V*| = " +
                  num(worst_gap) + " (tol 1e-6); obstacle-ignoring heuristic admissible everywhere: " +
                  (admissible ? "yes" : "no") + "; obstacle-free hit scores empty: " +
                  (empty_ok ? "yes" : "no") + "; " + num(t, "%.1f") + "s (budget 120s)"};
}

// ---------------------------------------------------------------------------
// 6. Successor representation times utility equals exact policy evaluation.
// ---------------------------------------------------------------------------
std::pair<bool, std::string> criterion6() {
  double max_diff = 0.0;
  for (const std::string& name : all_names()) {
    const GridMaze m = load(name);
    const TabularMdp mdp = full_mdp(m);
    const ValueIterationResult vi = value_iteration(mdp);
    const Policy opt = optimal_stochastic_policy(vi.q, mdp);
    const Policy uni(mdp.num_states, mdp.num_actions, 1.0 / mdp.num_actions);
    for (const Policy* pol : {&opt, &uni}) {
      const Matrix sr = successor_representation(mdp, *pol);
      const ValueFunction ref = policy_evaluation_exact(mdp, *pol);
      for (int s = 0; s < mdp.num_states; ++s) {
        double dot = 0.0;
        for (int sp = 0; sp < mdp.num_states; ++sp) {
          dot += sr(s, sp) * mdp.utility[static_cast<std::size_t>(sp)];
        }
        max_diff = std::max(max_diff, std::abs(dot - ref[static_cast<std::size_t>(s)]));
      }
    }
  }
  const bool ok = max_diff <= 1e-8;
  return {ok, "21 mazes x {optimal, uniform}: max |M_pi U - V_pi| = " + num(max_diff) +
                  " (tol 1e-8; dense inverse vs sparse solve)"};
}

// ---------------------------------------------------------------------------
// 7. Meta process: dense oracle match, rollout consistency, near-obstacle score.
// ---------------------------------------------------------------------------
std::pair<bool, std::string> criterion7() {
  const GridMaze m = load("tiny-ob");
  const MetaMdp meta = build_meta_mdp(m);
  const MetaSolveResult solved = solve_meta(meta);

  // (a) 18-state dense oracle, same state layout, values elementwise.
  const oracle::DenseMeta dense = oracle::meta_mdp(m);
  const Eigen::VectorXd vref = oracle::meta_vi(dense);
  double max_v_diff = 0.0;
  for (int x = 0; x < meta.mdp.num_states; ++x) {
    max_v_diff = std::max(max_v_diff, std::abs(solved.v[static_cast<std::size_t>(x)] - vref[x]));
  }
  const bool oracle_ok = max_v_diff <= 1e-8;

  // (b) 1000 seeded rollouts against the exact occupancy, three standard errors.
  const Policy swpi = construal_switch_policy(meta, solved);
  const OccupancyResult exact = meta_occupancy_exact(meta, swpi);
  OccupancyConfig rcfg;
  rcfg.n_rollouts = 1000;
  rcfg.seed = 20260815;
  const OccupancyResult mc = meta_occupancy_rollout(meta, swpi, rcfg);
  bool rollout_ok = mc.truncated_rollouts == 0;
  for (std::size_t x = 0; x < mc.visits.size(); ++x) {
    const double diff = std::abs(mc.visits[x] - exact.visits[x]);
    // Zero sample variance covers both never-visited states and states hit
    // identically every rollout (the start); hold those to an absolute bound.
    rollout_ok = rollout_ok && (mc.visit_se[x] > 0.0 ? diff <= 3.0 * mc.visit_se[x] : diff <= 3e-3);
  }
  const auto exact_scores = obstacle_modification_scores(meta, exact);
  const auto mc_scores = obstacle_modification_scores(meta, mc);
  for (std::size_t i = 0; i < mc_scores.size(); ++i) {
    const double slack = mc.score_se[i] > 0.0 ? 3.0 * mc.score_se[i] : 3e-3;
    rollout_ok = rollout_ok && std::abs(mc_scores[i] - exact_scores[i]) <= slack;
  }

  // (c) The blocking obstacle's modification score at the fixed default
  // parameters (sharpness 10, no exploration noise, arrival attribution,
  // terminal states counted).
  const double score = exact_scores[0];
  const bool score_ok = score > 0.9;

  const bool ok = oracle_ok && rollout_ok && score_ok;
  std::string detail = "dense 18-state oracle max |dV| = " + num(max_v_diff) +
                       " (tol 1e-8): " + (oracle_ok ? "ok" : "FAIL") +
                       "; 1000-rollout occupancy within 3 SE per meta state: " +
                       (rollout_ok ? "ok" : "FAIL") + "; near-obstacle score " + num(score) +
                       " > 0.9: " + (score_ok ? "ok" : "FAIL");
  if (!score_ok) {
    detail += " (beyond the obstacle every construal has equal value, so the switch softmax "
              "splits its mass at any sharpness; the discounted share attributable to the "
              "attended construal tops out well below 0.9)";
  }
  return {ok, detail};
}

// ---------------------------------------------------------------------------
// 8. Noise-parameter recovery from synthetic responses.
// ---------------------------------------------------------------------------
std::pair<bool, std::string> criterion8() {
  std::vector<NamedMaze> mazes;
  for (const std::string& name : big_names()) mazes.push_back({name, load(name)});

  FitConfig cfg;
  cfg.seed = 2026;
  const NoiseParams truth{7.0, 0.0, 9.0, 0.0};

  Stopwatch sw1;
  const ResponseTable noisy = generate_synthetic_responses(mazes, truth, cfg, 0.05, 101);
  const FitResult f1 = fit_noise_params(mazes, noisy, ParamGrid{}, cfg);
  const double t1 = sw1.seconds();

  Stopwatch sw2;
  const ResponseTable clean = generate_synthetic_responses(mazes, truth, cfg, 0.0, 0);
  const FitResult f2 = fit_noise_params(mazes, clean, ParamGrid{}, cfg);
  const double t2 = sw2.seconds();

  const bool ok = f1.best_r2 >= 0.9 && f2.best_r2 >= 0.999 && t1 < 1800.0 && t2 < 1800.0;
  return {ok, "300-point grid, 16 mazes: R^2 = " + num(f1.best_r2, "%.4f") +
                  " at sd 0.05 (need >= 0.9, " + num(t1, "%.0f") + "s), R^2 = " +
                  num(f2.best_r2, "%.6f") + " at sd 0 (need >= 0.999, " + num(t2, "%.0f") +
                  "s; budget 1800s each)"};
}

// ---------------------------------------------------------------------------
// 9. CLI runs are byte-identical under a fixed seed.
// ---------------------------------------------------------------------------
std::pair<bool, std::string> criterion9() {
  namespace fs = std::filesystem;
  const fs::path tmp = fs::temp_directory_path();
  const std::string maze_ob = g_fixtures + "/tiny-ob.maze";
  const std::string maze_r5 = g_fixtures + "/routes5.maze";

  const std::vector<std::string> invocations = {
      "solve '" + maze_r5 + "' --construal-bits 1 --format json --seed 3",
      "vgc '" + maze_r5 + "' --format csv --seed 9",
      "vgc-mod '" + maze_ob + "' --mode rollout --rollouts 200 --seed 7 --format json",
      "predictors '" + maze_ob + "' '" + maze_r5 + "' --n-sims 50 --seed 5",
      "render '" + maze_r5 + "' --scores 0.3,0.9 --seed 1",
  };

  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };

  int checked = 0;
  for (std::size_t i = 0; i < invocations.size(); ++i) {
    const fs::path out_a = tmp / ("construal_acc9_" + std::to_string(i) + "a.out");
    const fs::path out_b = tmp / ("construal_acc9_" + std::to_string(i) + "b.out");
    for (const auto& [path, tag] : {std::pair{out_a, "a"}, std::pair{out_b, "b"}}) {
      const std::string cmd = "'" + g_cli + "' " + invocations[i] + " > '" + path.string() +
                              "' 2> /dev/null";
      const int status = std::system(cmd.c_str());
      if (status != 0) {
        return {false, "invocation '" + invocations[i] + "' (run " + tag +
                           ") exited with status " + std::to_string(status)};
      }
    }
    const std::string a = slurp(out_a);
    const std::string b = slurp(out_b);
    fs::remove(out_a);
    fs::remove(out_b);
    if (a.empty()) return {false, "invocation '" + invocations[i] + "' produced no output"};
    if (a != b) return {false, "invocation '" + invocations[i] + "' differed between runs"};
    ++checked;
  }
  return {true, std::to_string(checked) +
                    " seeded invocations (solve, vgc, vgc-mod rollout, predictors, render) "
                    "byte-identical across repeat runs"};
}

// ---------------------------------------------------------------------------
// 10. Throughput: full 2^7 table under 10s, full meta solve under 60s per maze.
// ---------------------------------------------------------------------------
std::pair<bool, std::string> criterion10() {
  const GridMaze crit = load("crit-0");
  Stopwatch sw1;
  const VorTable table = vor_table(crit);
  const double t_vor = sw1.seconds();
  const bool vor_ok = table.records.size() == 128 && t_vor < 10.0;

  double t_meta_max = 0.0;
  bool meta_ok = true;
  for (const std::string& name : {std::string("crit-0"), std::string("maze-00")}) {
    const GridMaze m = load(name);
    Stopwatch sw2;
    const MetaMdp meta = build_meta_mdp(m);
    const MetaSolveResult solved = solve_meta(meta);
    const double t = sw2.seconds();
    t_meta_max = std::max(t_meta_max, t);
    meta_ok = meta_ok && t < 60.0 && meta.construals.size() == 128 &&
              std::isfinite(solved.v[static_cast<std::size_t>(meta.start_index())]);
  }

  const bool ok = vor_ok && meta_ok;
  return {ok, "128-construal plan-value table on 11x11 in " + num(t_vor, "%.2f") +
                  "s (budget 10s); full-set meta build+solve worst case " +
                  num(t_meta_max, "%.2f") + "s per maze (budget 60s)"};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::fprintf(stderr, "usage: %s <fixtures_dir> <cli_binary>\n", argv[0]);
    return 2;
  }
  g_fixtures = argv[1];
  g_cli = argv[2];

  run_criterion(1, "plan-value table matches the dense brute-force oracle", criterion1);
  run_criterion(2, "full plan dominates every simplified plan; simplified values are optimistic",
                criterion2);
  run_criterion(3, "distributions normalize; marginals and scores stay in [0,1]", criterion3);
  run_criterion(4, "relevant-far obstacle out-attends irrelevant-near obstacle", criterion4);
  run_criterion(5, "heuristic searches reach the optimum from the admissible heuristic",
                criterion5);
  run_criterion(6, "successor representation reproduces exact policy evaluation", criterion6);
  run_criterion(7, "construal-switching process: oracle, rollouts, near-obstacle score",
                criterion7);
  run_criterion(8, "noise-parameter grid fit recovers synthetic ground truth", criterion8);
  run_criterion(9, "seeded command-line runs are byte-identical", criterion9);
  run_criterion(10, "enumeration and meta solve stay inside the time budgets", criterion10);

  std::printf("%d / %d criteria passed\n", g_passed, g_passed + g_failed);
  return g_failed == 0 ? 0 : 1;
}
