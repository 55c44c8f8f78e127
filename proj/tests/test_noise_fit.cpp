#include <doctest.h>

#include <cmath>
#include <vector>

#include "construal/noise_fit.hpp"
#include "test_helpers.hpp"

using namespace construal;

namespace {

std::vector<NamedMaze> fit_mazes() {
  return {{"tiny-ob", testutil::load_fixture("tiny-ob")},
          {"routes5", testutil::load_fixture("routes5")}};
}

FitConfig fast_cfg() {
  FitConfig cfg;
  cfg.n_rollouts = 200;
  cfg.seed = 42;
  return cfg;
}

}  // namespace

TEST_CASE("ParamGrid::points matches the documented 300-point order") {
  const ParamGrid grid{};
  const auto pts = grid.points();
  REQUIRE(pts.size() == 300);
  CHECK(pts[0].action_inv_temp == 1.0);
  CHECK(pts[0].action_eps == 0.0);
  CHECK(pts[0].switch_inv_temp == 1.0);
  CHECK(pts[0].switch_eps == 0.0);
  // switch_eps is innermost, then switch_inv_temp, then action_eps, then
  // action_inv_temp outermost.
  CHECK(pts[1].switch_eps == 0.05);
  CHECK(pts[5].switch_inv_temp == 3.0);
  CHECK(pts[5].switch_eps == 0.0);
  CHECK(pts[25].action_eps == 0.1);
  CHECK(pts[25].switch_inv_temp == 1.0);
  CHECK(pts[75].action_inv_temp == 3.0);
  CHECK(pts[75].action_eps == 0.0);
  CHECK(pts[299].action_inv_temp == 7.0);
  CHECK(pts[299].switch_eps == 0.3);
}

TEST_CASE("modification_scores_at is deterministic and bounded") {
  const GridMaze m = testutil::load_fixture("routes5");
  const NoiseParams params{3.0, 0.1, 5.0, 0.1};
  const FitConfig cfg = fast_cfg();
  const auto a = modification_scores_at(m, params, cfg, 17);
  const auto b = modification_scores_at(m, params, cfg, 17);
  REQUIRE(a.size() == 2);
  CHECK(a == b);
  for (double s : a) {
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
  }
  const auto c = modification_scores_at(m, params, cfg, 18);
  CHECK(a != c);  // a different rollout stream moves the estimates
}

TEST_CASE("generate_synthetic_responses: noiseless equals the forward model") {
  const auto mazes = fit_mazes();
  const NoiseParams params{3.0, 0.1, 5.0, 0.1};
  const FitConfig cfg = fast_cfg();

  const ResponseTable clean = generate_synthetic_responses(mazes, params, cfg, 0.0, 99);
  REQUIRE(clean.size() == 3);  // 1 obstacle + 2 obstacles
  CHECK(clean[0].maze_id == "tiny-ob");
  CHECK(clean[0].obstacle_id == 0);
  CHECK(clean[1].maze_id == "routes5");
  CHECK(clean[2].obstacle_id == 1);
  for (const auto& row : clean) CHECK(row.measure == "modification");

  const auto tiny_scores =
      modification_scores_at(mazes[0].maze, params, cfg, mix_seed(cfg.seed, 0));
  CHECK(clean[0].mean_response == tiny_scores[0]);

  const ResponseTable noisy = generate_synthetic_responses(mazes, params, cfg, 0.05, 99);
  const ResponseTable noisy2 = generate_synthetic_responses(mazes, params, cfg, 0.05, 99);
  CHECK(noisy == noisy2);
  const ResponseTable other = generate_synthetic_responses(mazes, params, cfg, 0.05, 100);
  CHECK(noisy != other);
  bool moved = false;
  for (std::size_t i = 0; i < noisy.size(); ++i) {
    moved = moved || noisy[i].mean_response != clean[i].mean_response;
  }
  CHECK(moved);

  CHECK_THROWS_AS(generate_synthetic_responses(mazes, params, cfg, -0.1, 0),
                  std::invalid_argument);
}

TEST_CASE("fit_noise_params recovers the generating grid point exactly at zero noise") {
  const auto mazes = fit_mazes();
  const FitConfig cfg = fast_cfg();
  const NoiseParams truth{3.0, 0.1, 5.0, 0.1};

  ParamGrid grid;
  grid.action_inv_temps = {1.0, 3.0};
  grid.action_epss = {0.0, 0.1};
  grid.switch_inv_temps = {5.0};
  grid.switch_epss = {0.0, 0.1};
  REQUIRE(grid.points().size() == 8);

  const ResponseTable responses = generate_synthetic_responses(mazes, truth, cfg, 0.0, 7);
  const FitResult fit = fit_noise_params(mazes, responses, grid, cfg);

  CHECK(fit.best.action_inv_temp == truth.action_inv_temp);
  CHECK(fit.best.action_eps == truth.action_eps);
  CHECK(fit.best.switch_inv_temp == truth.switch_inv_temp);
  CHECK(fit.best.switch_eps == truth.switch_eps);
  CHECK(fit.best_index == 7);
  CHECK(fit.best_r2 == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(fit.grid_r2.size() == 8);
  for (double r2 : fit.grid_r2) {
    CHECK(r2 >= 0.0);
    CHECK(r2 <= 1.0);
  }

  // Identical seeds, identical fits, down to the last bit.
  const FitResult again = fit_noise_params(mazes, responses, grid, cfg);
  CHECK(again.best_index == fit.best_index);
  CHECK(again.grid_r2 == fit.grid_r2);
}

TEST_CASE("fit_noise_params validates its inputs") {
  const auto mazes = fit_mazes();
  const FitConfig cfg = fast_cfg();
  ParamGrid grid;
  grid.action_inv_temps = {1.0};
  grid.action_epss = {0.0};
  grid.switch_inv_temps = {5.0};
  grid.switch_epss = {0.0};

  ResponseTable unknown;
  unknown.push_back({"nowhere", 0, "modification", 0.5});
  unknown.push_back({"tiny-ob", 0, "modification", 0.5});
  unknown.push_back({"routes5", 0, "modification", 0.5});
  CHECK_THROWS_AS(fit_noise_params(mazes, unknown, grid, cfg), std::invalid_argument);

  ResponseTable bad_ob;
  bad_ob.push_back({"tiny-ob", 3, "modification", 0.5});
  bad_ob.push_back({"routes5", 0, "modification", 0.5});
  bad_ob.push_back({"routes5", 1, "modification", 0.5});
  CHECK_THROWS_AS(fit_noise_params(mazes, bad_ob, grid, cfg), std::invalid_argument);

  // Measure filtering can starve the pool below three pairs.
  ResponseTable wrong_measure;
  wrong_measure.push_back({"tiny-ob", 0, "salience", 0.5});
  wrong_measure.push_back({"routes5", 0, "salience", 0.5});
  wrong_measure.push_back({"routes5", 1, "salience", 0.5});
  FitConfig filtered = cfg;
  filtered.measure = "modification";
  CHECK_THROWS_AS(fit_noise_params(mazes, wrong_measure, grid, filtered), std::invalid_argument);

  CHECK_THROWS_AS(fit_noise_params({}, unknown, grid, cfg), std::invalid_argument);
}
