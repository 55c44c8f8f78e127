// construal: command-line front end for the construal planning library.
//
// Subcommands: solve, vgc, vgc-mod, predictors, fit, analyze, render.
// Exit codes: 0 success, 1 usage error, 2 computation error.
// All sampled quantities are driven by --seed; a fixed seed makes every
// invocation byte-identical on the same platform.

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "construal/analysis.hpp"
#include "construal/distances.hpp"
#include "construal/graph_predictors.hpp"
#include "construal/grid_maze.hpp"
#include "construal/meta.hpp"
#include "construal/noise_fit.hpp"
#include "construal/predictor_table.hpp"
#include "construal/svg_render.hpp"
#include "construal/types.hpp"
#include "construal/vor.hpp"

namespace {

using construal::ComputationError;
using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ComputationError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw ComputationError("cannot open output file: " + out_path);
  out << text;
}

construal::NamedMaze load_maze(const std::string& path) {
  construal::NamedMaze nm;
  nm.id = std::filesystem::path(path).stem().string();
  nm.maze = construal::parse_maze(read_file(path));
  return nm;
}

std::vector<construal::NamedMaze> load_mazes(const std::vector<std::string>& paths) {
  std::vector<construal::NamedMaze> out;
  out.reserve(paths.size());
  for (const std::string& p : paths) out.push_back(load_maze(p));
  return out;
}

std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::vector<double> parse_score_list(const std::string& text) {
  std::vector<double> out;
  if (text.empty()) return out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string_view tok(text.data() + pos,
                               (comma == std::string::npos ? text.size() : comma) - pos);
    double v = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
      throw CLI::ValidationError("--scores", "not a number: '" + std::string(tok) + "'");
    }
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

construal::Attribution parse_attribution(const std::string& s) {
  if (s == "inherited") return construal::Attribution::kInherited;
  if (s == "in-use") return construal::Attribution::kInUse;
  throw CLI::ValidationError("--attribution", "expected 'inherited' or 'in-use'");
}

const char* attribution_name(construal::Attribution a) {
  return a == construal::Attribution::kInherited ? "inherited" : "in-use";
}

json predictor_row_json(const construal::PredictorRow& r) {
  json j{{"maze_id", r.maze_id},   {"obstacle_id", r.obstacle_id},
         {"vgc", r.vgc},           {"vgc_mod", r.vgc_mod},
         {"traj_hs", r.traj_hs},   {"graph_hs", r.graph_hs},
         {"bottleneck", r.bottleneck}, {"sr_overlap", r.sr_overlap},
         {"opt_dist", r.opt_dist}, {"goal_dist", r.goal_dist},
         {"start_dist", r.start_dist}, {"wall_dist", r.wall_dist},
         {"center_dist", r.center_dist}};
  j["nav_dist"] = r.nav_dist ? json(*r.nav_dist) : json(nullptr);
  j["nav_dist_step"] = r.nav_dist_step ? json(*r.nav_dist_step) : json(nullptr);
  return j;
}

// Values from the --config JSON file fill in options the user did not pass.
class ConfigOverride {
 public:
  explicit ConfigOverride(const std::string& path) {
    if (!path.empty()) cfg_ = json::parse(read_file(path));
  }

  template <typename T>
  void apply(const CLI::Option* opt, const char* key, T& var) const {
    if (opt != nullptr && opt->count() > 0) return;
    if (cfg_.contains(key)) var = cfg_.at(key).get<T>();
  }

 private:
  json cfg_ = json::object();
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"construal planning toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 0;
  double gamma = construal::defaults::kGamma;
  double alpha = construal::defaults::kAlpha;
  double slip = construal::defaults::kSlip;
  std::string out_path;
  std::string format;
  std::string config_path;

  auto* opt_seed = app.add_option("--seed", seed, "Seed for all sampled quantities");
  auto* opt_gamma = app.add_option("--gamma", gamma, "Discount factor");
  auto* opt_alpha = app.add_option("--alpha", alpha, "Construal softmax temperature");
  auto* opt_slip = app.add_option("--slip", slip, "Action slip probability");
  app.add_option("--out", out_path, "Output file (default: stdout)");
  auto* opt_format = app.add_option("--format", format, "Output format")
                         ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--config", config_path, "JSON config file; explicit flags override it");

  // solve
  auto* sub_solve = app.add_subcommand("solve", "Plan under one construal and report its value");
  std::string solve_maze;
  std::int64_t solve_bits = -1;
  sub_solve->add_option("maze", solve_maze, "Maze file")->required();
  auto* opt_solve_bits = sub_solve->add_option(
      "--construal-bits", solve_bits, "Construal bitmask over obstacle ids (-1 = all attended)");

  // vgc
  auto* sub_vgc = app.add_subcommand("vgc", "Value-guided construal table and obstacle marginals");
  std::string vgc_maze;
  int vgc_max_size = -1;
  sub_vgc->add_option("maze", vgc_maze, "Maze file")->required();
  auto* opt_vgc_max = sub_vgc->add_option("--max-size", vgc_max_size,
                                          "Largest construal cardinality (-1 = full powerset)");

  // vgc-mod
  auto* sub_mod = app.add_subcommand("vgc-mod", "Construal-modification obstacle scores");
  std::string mod_maze;
  std::string mod_mode = "exact";
  std::string mod_attr = "inherited";
  bool mod_include_terminal = true;
  bool mod_action_noise = false;
  int mod_max_size = -1;
  int mod_rollouts = construal::defaults::kNRollouts;
  int mod_max_steps = construal::defaults::kRolloutMaxSteps;
  double mod_sit = construal::defaults::kSwitchInvTemp;
  double mod_seps = 0.0;
  double mod_ait = 1.0;
  double mod_aeps = 0.0;
  sub_mod->add_option("maze", mod_maze, "Maze file")->required();
  sub_mod->add_option("--mode", mod_mode, "Occupancy mode")->check(CLI::IsMember({"exact", "rollout"}));
  sub_mod->add_option("--attribution", mod_attr, "Visit attribution: inherited | in-use");
  sub_mod->add_flag("--include-terminal,!--exclude-terminal", mod_include_terminal,
                    "Count terminal-state occupancy (default on)");
  auto* opt_mod_max = sub_mod->add_option("--max-size", mod_max_size,
                                          "Largest construal cardinality (-1 = full powerset)");
  auto* opt_mod_rollouts = sub_mod->add_option("--rollouts", mod_rollouts, "Rollouts in rollout mode");
  sub_mod->add_option("--max-steps", mod_max_steps, "Rollout step cap");
  auto* opt_mod_sit = sub_mod->add_option("--switch-inv-temp", mod_sit,
                                          "Construal-switch softmax inverse temperature");
  sub_mod->add_option("--switch-eps", mod_seps, "Construal-switch uniform mixture weight");
  sub_mod->add_flag("--action-noise", mod_action_noise,
                    "Use eps-softmax action policies inside each construal");
  sub_mod->add_option("--action-inv-temp", mod_ait, "Action softmax inverse temperature");
  sub_mod->add_option("--action-eps", mod_aeps, "Action uniform mixture weight");

  // predictors
  auto* sub_pred = app.add_subcommand("predictors", "Predictor table over a set of mazes");
  std::vector<std::string> pred_mazes;
  std::string pred_attr = "inherited";
  std::string pred_spectral = "fiedler";
  bool pred_include_terminal = true;
  bool pred_meta_rollout = false;
  int pred_n_sims = construal::defaults::kNSims;
  int pred_rollouts = construal::defaults::kNRollouts;
  int pred_opt_samples = 100;
  double pred_sit = construal::defaults::kSwitchInvTemp;
  double pred_seps = 0.0;
  sub_pred->add_option("mazes", pred_mazes, "Maze files")->required()->expected(-1);
  auto* opt_pred_sims = sub_pred->add_option("--n-sims", pred_n_sims, "Planner simulations per maze");
  auto* opt_pred_rollouts = sub_pred->add_option("--rollouts", pred_rollouts,
                                                 "Meta rollouts (rollout mode)");
  sub_pred->add_flag("--meta-rollout", pred_meta_rollout,
                     "Estimate modification scores by rollout instead of exactly");
  sub_pred->add_option("--n-opt-samples", pred_opt_samples, "Optimal-trajectory samples for opt_dist");
  sub_pred->add_option("--spectral", pred_spectral, "Partition eigenvector")
      ->check(CLI::IsMember({"fiedler", "second-largest"}));
  sub_pred->add_option("--attribution", pred_attr, "Visit attribution: inherited | in-use");
  sub_pred->add_flag("--include-terminal,!--exclude-terminal", pred_include_terminal,
                     "Count terminal-state occupancy (default on)");
  sub_pred->add_option("--switch-inv-temp", pred_sit, "Construal-switch inverse temperature");
  sub_pred->add_option("--switch-eps", pred_seps, "Construal-switch uniform mixture weight");

  // fit
  auto* sub_fit = app.add_subcommand("fit", "Grid-search noise parameters against responses");
  std::vector<std::string> fit_mazes;
  std::string fit_responses;
  std::string fit_measure;
  std::string fit_attr = "inherited";
  bool fit_include_terminal = true;
  int fit_max_size = 3;
  int fit_rollouts = construal::defaults::kNRollouts;
  sub_fit->add_option("mazes", fit_mazes, "Maze files")->required()->expected(-1);
  sub_fit->add_option("--responses", fit_responses, "Response CSV")->required();
  sub_fit->add_option("--measure", fit_measure, "Restrict to one response measure");
  sub_fit->add_option("--max-size", fit_max_size, "Largest candidate construal cardinality");
  auto* opt_fit_rollouts = sub_fit->add_option("--rollouts", fit_rollouts, "Rollouts per maze");
  sub_fit->add_option("--attribution", fit_attr, "Visit attribution: inherited | in-use");
  sub_fit->add_flag("--include-terminal,!--exclude-terminal", fit_include_terminal,
                    "Count terminal-state occupancy (default on)");

  // analyze
  auto* sub_an = app.add_subcommand("analyze", "OLS of each response measure on each predictor");
  std::string an_table;
  std::string an_responses;
  bool an_no_zscore = false;
  sub_an->add_option("--table", an_table, "Predictor CSV")->required();
  sub_an->add_option("--responses", an_responses, "Response CSV")->required();
  sub_an->add_flag("--no-zscore", an_no_zscore, "Regress on raw predictor columns");

  // render
  auto* sub_render = app.add_subcommand("render", "Render a maze as an SVG heatmap");
  std::string render_maze;
  std::string render_scores;
  std::string render_norm = "unit";
  sub_render->add_option("maze", render_maze, "Maze file")->required();
  sub_render->add_option("--scores", render_scores, "Comma-separated per-obstacle scores");
  sub_render->add_option("--normalization", render_norm, "Score normalization")
      ->check(CLI::IsMember({"unit", "minmax"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const ConfigOverride cfg(config_path);
    cfg.apply(opt_seed, "seed", seed);
    cfg.apply(opt_gamma, "gamma", gamma);
    cfg.apply(opt_alpha, "alpha", alpha);
    cfg.apply(opt_slip, "slip", slip);
    cfg.apply(opt_format, "format", format);

    if (*sub_solve) {
      cfg.apply(opt_solve_bits, "construal_bits", solve_bits);
      const construal::NamedMaze nm = load_maze(solve_maze);
      const auto full = static_cast<std::int64_t>((1ull << nm.maze.num_obstacles()) - 1);
      const std::int64_t bits = solve_bits < 0 ? full : solve_bits;
      if (bits > full) throw ComputationError("construal bits reference missing obstacles");
      const auto mask = static_cast<construal::ConstrualMask>(bits);
      const construal::PlanResult pr = construal::plan_with_construal(nm.maze, mask, slip, gamma);
      const double bu = construal::behavioral_utility(nm.maze, pr.plan, slip, gamma);
      const json j{{"maze_id", nm.id},
                   {"construal_bits", bits},
                   {"v_start", pr.v[static_cast<std::size_t>(nm.maze.start)]},
                   {"behavioral_utility", bu}};
      if (format == "csv") {
        std::string text = "#schema=1\nmaze_id,construal_bits,v_start,behavioral_utility\n";
        text += nm.id + "," + std::to_string(bits) + "," +
                fmt(pr.v[static_cast<std::size_t>(nm.maze.start)]) + "," + fmt(bu) + "\n";
        write_output(out_path, text);
      } else {
        write_output(out_path, j.dump(2) + "\n");
      }
    } else if (*sub_vgc) {
      cfg.apply(opt_vgc_max, "max_size", vgc_max_size);
      const construal::NamedMaze nm = load_maze(vgc_maze);
      const construal::VorTable table = construal::vor_table(nm.maze, slip, gamma, vgc_max_size);
      const std::vector<double> dist = construal::construal_distribution(table, alpha);
      const std::vector<double> marg = construal::obstacle_marginals(table, dist);
      if (format == "csv") {
        std::string text = "#schema=1\nconstrual_bits,utility,cost,vor,prob\n";
        for (std::size_t i = 0; i < table.records.size(); ++i) {
          const construal::VorRecord& r = table.records[i];
          text += std::to_string(r.mask) + "," + fmt(r.behavioral_utility) + "," + fmt(r.cost) +
                  "," + fmt(r.vor) + "," + fmt(dist[i]) + "\n";
        }
        write_output(out_path, text);
      } else {
        json vor = json::array();
        for (std::size_t i = 0; i < table.records.size(); ++i) {
          const construal::VorRecord& r = table.records[i];
          vor.push_back({{"construal_bits", r.mask},
                         {"utility", r.behavioral_utility},
                         {"cost", r.cost},
                         {"vor", r.vor},
                         {"prob", dist[i]}});
        }
        const json j{{"maze_id", nm.id}, {"alpha", alpha}, {"vor", vor}, {"marginals", marg}};
        write_output(out_path, j.dump(2) + "\n");
      }
    } else if (*sub_mod) {
      cfg.apply(opt_mod_max, "max_size", mod_max_size);
      cfg.apply(opt_mod_rollouts, "rollouts", mod_rollouts);
      cfg.apply(opt_mod_sit, "switch_inv_temp", mod_sit);
      const construal::NamedMaze nm = load_maze(mod_maze);
      construal::MetaConfig mc;
      mc.max_size = mod_max_size;
      mc.slip = slip;
      mc.gamma = gamma;
      mc.action_noise = mod_action_noise;
      mc.action_inv_temp = mod_ait;
      mc.action_eps = mod_aeps;
      const construal::MetaMdp meta = construal::build_meta_mdp(nm.maze, mc);
      const construal::MetaSolveResult solved = construal::solve_meta(meta);
      const construal::Policy swpi =
          construal::construal_switch_policy(meta, solved, mod_sit, mod_seps);
      construal::OccupancyConfig oc;
      oc.attribution = parse_attribution(mod_attr);
      oc.include_terminal = mod_include_terminal;
      oc.n_rollouts = mod_rollouts;
      oc.max_steps = mod_max_steps;
      oc.seed = seed;
      const construal::OccupancyResult occ = mod_mode == "rollout"
                                                 ? construal::meta_occupancy_rollout(meta, swpi, oc)
                                                 : construal::meta_occupancy_exact(meta, swpi, oc);
      if (occ.truncated_rollouts > 0) {
        std::cerr << "warning: " << occ.truncated_rollouts << " of " << mod_rollouts
                  << " rollouts hit the step cap before reaching a terminal state\n";
      }
      const std::vector<double> scores = construal::obstacle_modification_scores(meta, occ);
      json params{{"max_size", mod_max_size},
                  {"attribution", attribution_name(oc.attribution)},
                  {"include_terminal", mod_include_terminal},
                  {"switch_inv_temp", mod_sit},
                  {"switch_eps", mod_seps},
                  {"action_noise", mod_action_noise},
                  {"gamma", gamma},
                  {"slip", slip}};
      if (mod_action_noise) {
        params["action_inv_temp"] = mod_ait;
        params["action_eps"] = mod_aeps;
      }
      if (mod_mode == "rollout") {
        params["rollouts"] = mod_rollouts;
        params["max_steps"] = mod_max_steps;
        params["seed"] = seed;
      }
      if (format == "csv") {
        std::string text = "#schema=1\nmaze_id,obstacle_id,score\n";
        for (std::size_t i = 0; i < scores.size(); ++i) {
          text += nm.id + "," + std::to_string(i) + "," + fmt(scores[i]) + "\n";
        }
        write_output(out_path, text);
      } else {
        json j{{"maze_id", nm.id}, {"mode", mod_mode}, {"params", params}, {"scores", scores}};
        if (mod_mode == "rollout") j["score_se"] = occ.score_se;
        write_output(out_path, j.dump(2) + "\n");
      }
    } else if (*sub_pred) {
      cfg.apply(opt_pred_sims, "n_sims", pred_n_sims);
      cfg.apply(opt_pred_rollouts, "rollouts", pred_rollouts);
      construal::PredictorConfig pc;
      pc.slip = slip;
      pc.gamma = gamma;
      pc.alpha = alpha;
      pc.switch_inv_temp = pred_sit;
      pc.switch_eps = pred_seps;
      pc.attribution = parse_attribution(pred_attr);
      pc.include_terminal = pred_include_terminal;
      pc.meta_rollout = pred_meta_rollout;
      pc.n_rollouts = pred_rollouts;
      pc.n_sims = pred_n_sims;
      pc.n_opt_samples = pred_opt_samples;
      pc.spectral = pred_spectral == "fiedler" ? construal::SpectralMode::kFiedler
                                               : construal::SpectralMode::kSecondLargest;
      pc.seed = seed;
      const construal::PredictorTable table =
          construal::predictor_table(load_mazes(pred_mazes), pc);
      if (format == "json") {
        json rows = json::array();
        for (const construal::PredictorRow& r : table.rows) rows.push_back(predictor_row_json(r));
        write_output(out_path, rows.dump(2) + "\n");
      } else {
        write_output(out_path, construal::predictor_csv(table));
      }
    } else if (*sub_fit) {
      cfg.apply(opt_fit_rollouts, "rollouts", fit_rollouts);
      construal::FitConfig fc;
      fc.max_size = fit_max_size;
      fc.n_rollouts = fit_rollouts;
      fc.seed = seed;
      fc.slip = slip;
      fc.gamma = gamma;
      fc.attribution = parse_attribution(fit_attr);
      fc.include_terminal = fit_include_terminal;
      fc.measure = fit_measure;
      const construal::ResponseTable responses =
          construal::parse_response_csv(read_file(fit_responses));
      const construal::FitResult res =
          construal::fit_noise_params(load_mazes(fit_mazes), responses, {}, fc);
      if (format == "csv") {
        std::string text =
            "#schema=1\naction_inv_temp,action_eps,switch_inv_temp,switch_eps,r_squared\n";
        text += fmt(res.best.action_inv_temp) + "," + fmt(res.best.action_eps) + "," +
                fmt(res.best.switch_inv_temp) + "," + fmt(res.best.switch_eps) + "," +
                fmt(res.best_r2) + "\n";
        write_output(out_path, text);
      } else {
        const json j{{"best",
                      {{"action_inv_temp", res.best.action_inv_temp},
                       {"action_eps", res.best.action_eps},
                       {"switch_inv_temp", res.best.switch_inv_temp},
                       {"switch_eps", res.best.switch_eps}}},
                     {"r_squared", res.best_r2},
                     {"best_index", res.best_index},
                     {"grid_points", res.grid_r2.size()},
                     {"measure", fit_measure.empty() ? json(nullptr) : json(fit_measure)}};
        write_output(out_path, j.dump(2) + "\n");
      }
    } else if (*sub_an) {
      const construal::PredictorTable table =
          construal::parse_predictor_csv(read_file(an_table));
      const construal::ResponseTable responses =
          construal::parse_response_csv(read_file(an_responses));
      const construal::AnalyzeResult res = construal::analyze(table, responses, !an_no_zscore);
      for (const std::string& w : res.warnings) std::cerr << "warning: " << w << "\n";
      if (format == "json") {
        json records = json::array();
        for (const construal::AnalysisRecord& r : res.records) {
          records.push_back({{"predictor", r.predictor},
                             {"measure", r.measure},
                             {"slope", r.fit.slope},
                             {"intercept", r.fit.intercept},
                             {"r_squared", r.fit.r_squared},
                             {"n", r.fit.n}});
        }
        write_output(out_path, records.dump(2) + "\n");
      } else {
        std::string text = "#schema=1\npredictor,measure,slope,intercept,r_squared,n\n";
        for (const construal::AnalysisRecord& r : res.records) {
          text += r.predictor + "," + r.measure + "," + fmt(r.fit.slope) + "," +
                  fmt(r.fit.intercept) + "," + fmt(r.fit.r_squared) + "," +
                  std::to_string(r.fit.n) + "\n";
        }
        write_output(out_path, text);
      }
    } else if (*sub_render) {
      const construal::NamedMaze nm = load_maze(render_maze);
      const std::vector<double> scores = parse_score_list(render_scores);
      const construal::Normalization norm = render_norm == "minmax"
                                                ? construal::Normalization::kMinMax
                                                : construal::Normalization::kUnit;
      write_output(out_path, construal::render_heatmap(nm.maze, scores, norm));
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const ComputationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
