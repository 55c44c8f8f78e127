#pragma once

#include <vector>

#include "construal/grid_maze.hpp"
#include "construal/tabular_mdp.hpp"
#include "construal/types.hpp"

namespace construal {

// One factor of the transition kernel. The kernel for a construal is the
// normalized product of Move, Walls, and the construed subset of the Obstacle
// factors; leaving an Obstacle factor out is what "ignoring" it means.
enum class EffectKind { Move, Walls, Obstacle };

struct EffectPotential {
  EffectKind kind = EffectKind::Move;
  int obstacle_id = -1;                // Obstacle only
  double slip = 0.0;                   // Move only
  std::vector<std::uint8_t> blocked;   // per-state indicator; Walls/Obstacle only
};

// Move first, then Walls, then one Obstacle factor per obstacle id in order.
std::vector<EffectPotential> build_effects(const GridMaze& m, double slip = defaults::kSlip);

// Unnormalized weight the factor assigns to the move s --a--> next.
//   Move: 1 - slip on the displaced cell and slip on staying put; if the
//         displacement leaves the grid all weight is on staying.
//   Walls / Obstacle: 0 on entering a blocked cell (next != s), else 1.
double effect_weight(const EffectPotential& e, const GridMaze& m, int s, int a, int next);

// Product-of-experts kernel over the construed effect subset, normalized per
// (state, action). The goal is terminal and absorbing with utility 0; every
// other state has utility -1.
TabularMdp compose_construed_mdp(const GridMaze& m, ConstrualMask c,
                                 double slip = defaults::kSlip, double gamma = defaults::kGamma);

// All obstacle effects attended: the true task dynamics.
TabularMdp full_mdp(const GridMaze& m, double slip = defaults::kSlip, double gamma = defaults::kGamma);

}  // namespace construal
