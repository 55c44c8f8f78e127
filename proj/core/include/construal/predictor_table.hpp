#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "construal/graph_predictors.hpp"
#include "construal/grid_maze.hpp"
#include "construal/meta.hpp"
#include "construal/types.hpp"

namespace construal {

struct NamedMaze {
  std::string id;
  GridMaze maze;
};

// One row per (maze, obstacle); column meanings:
//   vgc         P(obstacle attended) under the softmax over construal values
//   vgc_mod     discounted attention share under the construal-switching process
//   traj_hs     ln(mean per-run hit count + 1) from LRTDP simulations
//   graph_hs    LAO* expansion hits / n_sims
//   bottleneck  min Manhattan distance to an optimal bottleneck state
//   sr_overlap  successor-representation mass over the obstacle's cells
//   *_dist      Manhattan landmark distances (lower = nearer)
struct PredictorRow {
  std::string maze_id;
  int obstacle_id = 0;
  double vgc = 0.0;
  double vgc_mod = 0.0;
  double traj_hs = 0.0;
  double graph_hs = 0.0;
  double bottleneck = 0.0;
  double sr_overlap = 0.0;
  double opt_dist = 0.0;
  double goal_dist = 0.0;
  double start_dist = 0.0;
  double wall_dist = 0.0;
  double center_dist = 0.0;
  std::optional<double> nav_dist;
  std::optional<double> nav_dist_step;

  bool operator==(const PredictorRow&) const = default;
};

struct PredictorTable {
  std::vector<PredictorRow> rows;
  bool operator==(const PredictorTable&) const = default;
};

inline constexpr std::string_view kPredictorCsvHeader =
    "maze_id,obstacle_id,vgc,vgc_mod,traj_hs,graph_hs,bottleneck,sr_overlap,opt_dist,goal_dist,"
    "start_dist,wall_dist,center_dist,nav_dist,nav_dist_step";

struct PredictorConfig {
  double slip = defaults::kSlip;
  double gamma = defaults::kGamma;
  double alpha = defaults::kAlpha;
  double switch_inv_temp = defaults::kSwitchInvTemp;
  double switch_eps = 0.0;
  Attribution attribution = Attribution::kInherited;
  bool include_terminal = true;
  bool meta_rollout = false;  // exact occupancy by default
  int n_rollouts = defaults::kNRollouts;
  int rollout_max_steps = defaults::kRolloutMaxSteps;
  int n_sims = defaults::kNSims;
  int n_opt_samples = 100;
  SpectralMode spectral = SpectralMode::kFiedler;
  std::uint64_t seed = 0;
  double vi_tol = defaults::kViTol;
  double tie_tol = defaults::kTieTol;
};

// Assembles every predictor column for every obstacle of every maze.
// Deterministic given the config; per-maze failures are rethrown with the
// maze id prefixed.
PredictorTable predictor_table(const std::vector<NamedMaze>& mazes, const PredictorConfig& cfg = {});

// CSV with a leading "#schema=1" comment line and the fixed column header.
// Numbers use shortest round-trip formatting; parse(print(t)) == t.
std::string predictor_csv(const PredictorTable& table);
PredictorTable parse_predictor_csv(std::string_view text);

struct ResponseRow {
  std::string maze_id;
  int obstacle_id = 0;
  std::string measure;
  double mean_response = 0.0;

  bool operator==(const ResponseRow&) const = default;
};
using ResponseTable = std::vector<ResponseRow>;

std::string response_csv(const ResponseTable& table);
ResponseTable parse_response_csv(std::string_view text);

}  // namespace construal
