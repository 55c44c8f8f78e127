#include <doctest.h>

#include <cmath>
#include <vector>

#include "construal/distances.hpp"
#include "construal/grid_maze.hpp"
#include "test_helpers.hpp"

using namespace construal;

TEST_CASE("landmark distances on the 3x3 single-obstacle maze") {
  const GridMaze m = testutil::load_fixture("tiny-ob");
  const auto recs = distance_predictors(m);
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].start_dist == 1.0);
  CHECK(recs[0].goal_dist == 1.0);
  CHECK(recs[0].wall_dist == 6.0);    // no walls: width + height sentinel
  CHECK(recs[0].center_dist == 0.0);  // the obstacle is the center cell
  // Every optimal trajectory starts adjacent to the obstacle, so the mean
  // minimum distance is exactly 1.
  CHECK(recs[0].opt_dist == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(recs[0].nav_dist.has_value());
  CHECK_FALSE(recs[0].nav_dist_step.has_value());
}

TEST_CASE("landmark distances on the two-route maze") {
  const GridMaze m = testutil::load_fixture("routes5");
  const auto recs = distance_predictors(m);
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].start_dist == 4.0);
  CHECK(recs[0].goal_dist == 4.0);
  CHECK(recs[0].wall_dist == 1.0);    // wall block ends right above it
  CHECK(recs[0].center_dist == 2.0);  // center is (2, 2)
  CHECK(recs[1].start_dist == 6.0);
  CHECK(recs[1].goal_dist == 2.0);
  CHECK(recs[1].wall_dist == 3.0);
  CHECK(recs[1].center_dist == 4.0);
}

TEST_CASE("multi-cell obstacles take the minimum over their cells") {
  const GridMaze m = testutil::load_fixture("crit-0");
  const auto recs = distance_predictors(m);
  REQUIRE(recs.size() == 7);
  // Obstacle 0: the relevant-but-far column; obstacle 1: the irrelevant blob
  // right next to the start.
  CHECK(recs[0].start_dist == 4.0);
  CHECK(recs[0].goal_dist == 7.0);
  CHECK(recs[1].start_dist == 1.0);
  CHECK(recs[1].goal_dist == 4.0);
  // Optimal travel keeps a fixed profile against both obstacles.
  CHECK(recs[0].opt_dist == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(recs[1].opt_dist == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("opt_dist is seeded and variance-free on a single-route maze") {
  const GridMaze m = parse_maze("S0\nG.\n");
  double first = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto recs = distance_predictors(m, nullptr, 100, seed);
    REQUIRE(recs.size() == 1);
    if (seed == 0) first = recs[0].opt_dist;
    CHECK(recs[0].opt_dist == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(recs[0].opt_dist == first);
  }
  // Same seed, same numbers, bit for bit.
  const auto a = distance_predictors(m, nullptr, 100, 9);
  const auto b = distance_predictors(m, nullptr, 100, 9);
  CHECK(a[0].opt_dist == b[0].opt_dist);
}

TEST_CASE("navigation trajectory fields: minimum and its earliest step") {
  const GridMaze m = testutil::load_fixture("routes5");
  const std::vector<int> traj{m.index(0, 2), m.index(0, 3)};
  const auto recs = distance_predictors(m, &traj);
  REQUIRE(recs.size() == 2);
  REQUIRE(recs[0].nav_dist.has_value());
  CHECK(*recs[0].nav_dist == 3.0);       // step 1 is distance 3 from obstacle 0
  CHECK(*recs[0].nav_dist_step == 1.0);  // first achieved at step 1
  CHECK(*recs[1].nav_dist == 5.0);
  CHECK(*recs[1].nav_dist_step == 1.0);

  // A single-state trajectory achieves its minimum at step 0.
  const std::vector<int> stay{m.index(0, 2)};
  const auto recs2 = distance_predictors(m, &stay);
  CHECK(*recs2[0].nav_dist == 4.0);
  CHECK(*recs2[0].nav_dist_step == 0.0);
}

TEST_CASE("distance_predictors rejects bad arguments") {
  const GridMaze m = testutil::load_fixture("tiny-ob");
  const std::vector<int> empty;
  CHECK_THROWS_AS(distance_predictors(m, &empty), std::invalid_argument);
  const std::vector<int> out_of_range{m.size()};
  CHECK_THROWS_AS(distance_predictors(m, &out_of_range), std::invalid_argument);
  CHECK_THROWS_AS(distance_predictors(m, nullptr, 0), std::invalid_argument);
}
