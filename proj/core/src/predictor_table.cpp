#include "construal/predictor_table.hpp"

#include <charconv>
#include <system_error>

#include "construal/construed_task.hpp"
#include "construal/distances.hpp"
#include "construal/heuristic_search.hpp"
#include "construal/vor.hpp"

namespace construal {
namespace {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s, int line_no) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ComputationError("csv line " + std::to_string(line_no) + ": bad number '" + std::string(s) + "'");
  }
  return v;
}

int parse_int(std::string_view s, int line_no) {
  int v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ComputationError("csv line " + std::to_string(line_no) + ": bad integer '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t begin = 0;
  while (true) {
    const std::size_t comma = line.find(',', begin);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(begin));
      return out;
    }
    out.push_back(line.substr(begin, comma - begin));
    begin = comma + 1;
  }
}

// Lines of `text` without trailing \r, skipping blank tails.
std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    std::size_t end = text.find('\n', begin);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(begin, end - begin);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (end == text.size()) break;
    begin = end + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

void check_field_text(const std::string& s, const char* what) {
  if (s.find(',') != std::string::npos || s.find('\n') != std::string::npos) {
    throw ComputationError(std::string("csv: ") + what + " may not contain commas or newlines: '" + s + "'");
  }
}

}  // namespace

PredictorTable predictor_table(const std::vector<NamedMaze>& mazes, const PredictorConfig& cfg) {
  PredictorTable table;
  for (std::size_t idx = 0; idx < mazes.size(); ++idx) {
    const std::string& id = mazes[idx].id;
    const GridMaze& m = mazes[idx].maze;
    const std::uint64_t maze_seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(idx));
    try {
      const VorTable vor = vor_table(m, cfg.slip, cfg.gamma, -1, cfg.vi_tol, cfg.tie_tol);
      const std::vector<double> dist = construal_distribution(vor, cfg.alpha);
      const std::vector<double> vgc = obstacle_marginals(vor, dist);

      // The meta process replans the same construals; reuse the VOR plans.
      const TabularMdp base = full_mdp(m, cfg.slip, cfg.gamma);
      std::vector<ConstrualMask> masks;
      std::vector<Policy> plans;
      masks.reserve(vor.records.size());
      plans.reserve(vor.records.size());
      for (const VorRecord& rec : vor.records) {
        masks.push_back(rec.mask);
        plans.push_back(rec.plan);
      }
      const MetaMdp meta = build_meta_mdp_from_policies(base, m.start, masks, plans);
      const MetaSolveResult solved = solve_meta(meta);
      const Policy swpi = construal_switch_policy(meta, solved, cfg.switch_inv_temp, cfg.switch_eps);
      OccupancyConfig occfg;
      occfg.attribution = cfg.attribution;
      occfg.include_terminal = cfg.include_terminal;
      occfg.n_rollouts = cfg.n_rollouts;
      occfg.max_steps = cfg.rollout_max_steps;
      occfg.seed = mix_seed(maze_seed, 4);
      const OccupancyResult occ = cfg.meta_rollout ? meta_occupancy_rollout(meta, swpi, occfg)
                                                   : meta_occupancy_exact(meta, swpi, occfg);
      const std::vector<double> vgc_mod = obstacle_modification_scores(meta, occ);

      const HitScores traj = lrtdp_hits(m, cfg.n_sims, mix_seed(maze_seed, 1), cfg.slip, cfg.gamma);
      const HitScores graph = lao_star_hits(m, cfg.n_sims, mix_seed(maze_seed, 2), cfg.slip, cfg.gamma);
      const BottleneckResult bott =
          bottleneck_distance(m, cfg.spectral, cfg.slip, cfg.gamma, cfg.vi_tol, cfg.tie_tol);
      const std::vector<double> sr = sr_overlap(m, cfg.slip, cfg.gamma, cfg.vi_tol, cfg.tie_tol);
      const std::vector<DistanceRecord> dists =
          distance_predictors(m, nullptr, cfg.n_opt_samples, mix_seed(maze_seed, 3), cfg.slip, cfg.gamma);

      for (int i = 0; i < m.num_obstacles(); ++i) {
        PredictorRow row;
        row.maze_id = id;
        row.obstacle_id = i;
        row.vgc = vgc[static_cast<std::size_t>(i)];
        row.vgc_mod = vgc_mod[static_cast<std::size_t>(i)];
        row.traj_hs = traj.scores[static_cast<std::size_t>(i)];
        row.graph_hs = graph.scores[static_cast<std::size_t>(i)];
        row.bottleneck = bott.scores[static_cast<std::size_t>(i)];
        row.sr_overlap = sr[static_cast<std::size_t>(i)];
        row.opt_dist = dists[static_cast<std::size_t>(i)].opt_dist;
        row.goal_dist = dists[static_cast<std::size_t>(i)].goal_dist;
        row.start_dist = dists[static_cast<std::size_t>(i)].start_dist;
        row.wall_dist = dists[static_cast<std::size_t>(i)].wall_dist;
        row.center_dist = dists[static_cast<std::size_t>(i)].center_dist;
        table.rows.push_back(std::move(row));
      }
    } catch (const std::exception& e) {
      throw ComputationError(id + ": " + e.what());
    }
  }
  return table;
}

std::string predictor_csv(const PredictorTable& table) {
  std::string out = "#schema=1\n";
  out += kPredictorCsvHeader;
  out += '\n';
  for (const PredictorRow& r : table.rows) {
    check_field_text(r.maze_id, "maze_id");
    out += r.maze_id;
    out += ',';
    out += std::to_string(r.obstacle_id);
    for (double v : {r.vgc, r.vgc_mod, r.traj_hs, r.graph_hs, r.bottleneck, r.sr_overlap, r.opt_dist,
                     r.goal_dist, r.start_dist, r.wall_dist, r.center_dist}) {
      out += ',';
      out += format_double(v);
    }
    out += ',';
    if (r.nav_dist) out += format_double(*r.nav_dist);
    out += ',';
    if (r.nav_dist_step) out += format_double(*r.nav_dist_step);
    out += '\n';
  }
  return out;
}

PredictorTable parse_predictor_csv(std::string_view text) {
  const std::vector<std::string_view> lines = split_lines(text);
  std::size_t i = 0;
  while (i < lines.size() && (lines[i].empty() || lines[i].front() == '#')) ++i;
  if (i >= lines.size() || lines[i] != kPredictorCsvHeader) {
    throw ComputationError("predictor csv: missing or unexpected header line");
  }
  PredictorTable table;
  for (++i; i < lines.size(); ++i) {
    if (lines[i].empty() || lines[i].front() == '#') continue;
    const int line_no = static_cast<int>(i) + 1;
    const std::vector<std::string_view> f = split_fields(lines[i]);
    if (f.size() != 15) {
      throw ComputationError("csv line " + std::to_string(line_no) + ": expected 15 fields, got " +
                             std::to_string(f.size()));
    }
    PredictorRow r;
    r.maze_id = std::string(f[0]);
    r.obstacle_id = parse_int(f[1], line_no);
    r.vgc = parse_double(f[2], line_no);
    r.vgc_mod = parse_double(f[3], line_no);
    r.traj_hs = parse_double(f[4], line_no);
    r.graph_hs = parse_double(f[5], line_no);
    r.bottleneck = parse_double(f[6], line_no);
    r.sr_overlap = parse_double(f[7], line_no);
    r.opt_dist = parse_double(f[8], line_no);
    r.goal_dist = parse_double(f[9], line_no);
    r.start_dist = parse_double(f[10], line_no);
    r.wall_dist = parse_double(f[11], line_no);
    r.center_dist = parse_double(f[12], line_no);
    if (!f[13].empty()) r.nav_dist = parse_double(f[13], line_no);
    if (!f[14].empty()) r.nav_dist_step = parse_double(f[14], line_no);
    table.rows.push_back(std::move(r));
  }
  return table;
}

std::string response_csv(const ResponseTable& table) {
  std::string out = "#schema=1\nmaze_id,obstacle_id,measure,mean_response\n";
  for (const ResponseRow& r : table) {
    check_field_text(r.maze_id, "maze_id");
    check_field_text(r.measure, "measure");
    out += r.maze_id;
    out += ',';
    out += std::to_string(r.obstacle_id);
    out += ',';
    out += r.measure;
    out += ',';
    out += format_double(r.mean_response);
    out += '\n';
  }
  return out;
}

ResponseTable parse_response_csv(std::string_view text) {
  const std::vector<std::string_view> lines = split_lines(text);
  std::size_t i = 0;
  while (i < lines.size() && (lines[i].empty() || lines[i].front() == '#')) ++i;
  if (i >= lines.size() || lines[i] != std::string_view("maze_id,obstacle_id,measure,mean_response")) {
    throw ComputationError("response csv: missing or unexpected header line");
  }
  ResponseTable table;
  for (++i; i < lines.size(); ++i) {
    if (lines[i].empty() || lines[i].front() == '#') continue;
    const int line_no = static_cast<int>(i) + 1;
    const std::vector<std::string_view> f = split_fields(lines[i]);
    if (f.size() != 4) {
      throw ComputationError("csv line " + std::to_string(line_no) + ": expected 4 fields, got " +
                             std::to_string(f.size()));
    }
    ResponseRow r;
    r.maze_id = std::string(f[0]);
    r.obstacle_id = parse_int(f[1], line_no);
    r.measure = std::string(f[2]);
    r.mean_response = parse_double(f[3], line_no);
    table.push_back(std::move(r));
  }
  return table;
}

}  // namespace construal
