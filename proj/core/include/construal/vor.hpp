#pragma once

#include <vector>

#include "construal/construed_task.hpp"
#include "construal/grid_maze.hpp"
#include "construal/solvers.hpp"
#include "construal/types.hpp"

namespace construal {

struct PlanResult {
  Policy plan;
  ValueFunction v;  // construed optimal values
  QFunction q;
};

// Solve the construed task and return its optimal stochastic plan.
PlanResult plan_with_construal(const GridMaze& m, ConstrualMask c,
                               double slip = defaults::kSlip, double gamma = defaults::kGamma,
                               double vi_tol = defaults::kViTol, double tie_tol = defaults::kTieTol);

// Expected discounted return of `plan` from the start state under the true
// (all effects attended) dynamics.
double behavioral_utility(const GridMaze& m, const Policy& plan,
                          double slip = defaults::kSlip, double gamma = defaults::kGamma);

struct VorRecord {
  ConstrualMask mask = 0;
  double behavioral_utility = 0.0;
  double cost = 0.0;  // |mask|
  double vor = 0.0;   // behavioral_utility - cost
  Policy plan;
};

struct VorTable {
  int n_obstacles = 0;
  std::vector<VorRecord> records;  // ascending mask order
};

// Enumerates construals (all 2^N, or |c| <= max_size when max_size >= 0),
// plans in each construed world, and evaluates every plan against the true
// dynamics. Refuses full enumeration beyond 20 obstacles.
VorTable vor_table(const GridMaze& m, double slip = defaults::kSlip, double gamma = defaults::kGamma,
                   int max_size = -1, double vi_tol = defaults::kViTol,
                   double tie_tol = defaults::kTieTol);

// Softmax over VOR at temperature alpha, computed with max subtraction.
// Indexed like table.records; sums to 1.
std::vector<double> construal_distribution(const VorTable& table, double alpha = defaults::kAlpha);

// P(obstacle i attended) = sum of distribution mass over construals containing i.
std::vector<double> obstacle_marginals(const VorTable& table, const std::vector<double>& dist);

}  // namespace construal
