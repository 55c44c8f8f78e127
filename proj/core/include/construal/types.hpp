#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace construal {

// Dense row-major matrix. Small enough for the tabular problems handled here;
// heavy linear algebra happens behind the solver API, not on this type.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c, double fill = 0.0) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, fill) {}

  double& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }
};

using ValueFunction = std::vector<double>;
// Row-stochastic: rows are states, columns actions.
using Policy = Matrix;
using QFunction = Matrix;

// A construal is a subset of the obstacle effects, encoded one bit per obstacle id.
using ConstrualMask = std::uint32_t;

inline int construal_size(ConstrualMask c) { return std::popcount(c); }

inline bool construal_contains(ConstrualMask c, int obstacle_id) {
  return (c >> obstacle_id) & 1u;
}

// Effects present in `to` but not in `from`; adding effects is what switching charges for.
inline int construal_added(ConstrualMask from, ConstrualMask to) {
  return std::popcount(to & ~from);
}

// All masks over n obstacles in increasing numeric order, optionally capped by
// cardinality. max_size < 0 means no cap. The numeric order is load-bearing:
// every table and meta-level action space indexes construals this way.
std::vector<ConstrualMask> enumerate_construals(int n_obstacles, int max_size = -1);

// SplitMix64 step; used to derive independent per-stream seeds from one base seed.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream);

class ComputationError : public std::runtime_error {
 public:
  explicit ComputationError(const std::string& what) : std::runtime_error(what) {}
};

// Shared task defaults. Every CLI flag and API parameter that overrides one of
// these names the same quantity.
namespace defaults {
inline constexpr double kGamma = 0.99;            // discount
inline constexpr double kSlip = 1e-5;             // action noise in the movement dynamics
inline constexpr double kAlpha = 0.1;             // construal softmax temperature
inline constexpr double kVorInvTemp = 1.0 / kAlpha;
inline constexpr double kViTol = 1e-10;           // value-iteration residual target
inline constexpr double kTieTol = 1e-8;           // Q-value tie tolerance
inline constexpr double kSwitchInvTemp = 10.0;    // construal-switch softmax sharpness
inline constexpr int kNSims = 200;                // heuristic-search simulations
inline constexpr int kNRollouts = 1000;           // meta-level occupancy rollouts
inline constexpr int kRolloutMaxSteps = 1000;
}  // namespace defaults

}  // namespace construal
