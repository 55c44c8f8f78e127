#include "construal/construed_task.hpp"

#include <array>

namespace construal {

std::vector<EffectPotential> build_effects(const GridMaze& m, double slip) {
  std::vector<EffectPotential> effects;
  effects.push_back({EffectKind::Move, -1, slip, {}});

  EffectPotential walls{EffectKind::Walls, -1, 0.0, m.wall};
  effects.push_back(std::move(walls));

  for (int i = 0; i < m.num_obstacles(); ++i) {
    EffectPotential e{EffectKind::Obstacle, i, 0.0, std::vector<std::uint8_t>(m.size(), 0)};
    for (int s : m.obstacles[i]) e.blocked[s] = 1;
    effects.push_back(std::move(e));
  }
  return effects;
}

double effect_weight(const EffectPotential& e, const GridMaze& m, int s, int a, int next) {
  if (e.kind == EffectKind::Move) {
    const Cell d = displaced(m.cell(s), a);
    if (!m.in_bounds(d)) return next == s ? 1.0 : 0.0;
    const int ds = m.index(d);
    if (next == ds) return 1.0 - e.slip;
    if (next == s) return e.slip;
    return 0.0;
  }
  // Blocking factors veto entering a blocked cell; staying put is never entry.
  if (next != s && e.blocked[next]) return 0.0;
  return 1.0;
}

TabularMdp compose_construed_mdp(const GridMaze& m, ConstrualMask c, double slip, double gamma) {
  if (m.num_obstacles() > 20) {
    throw ComputationError("compose_construed_mdp: more than 20 obstacle effects");
  }
  const std::vector<EffectPotential> effects = build_effects(m, slip);
  std::vector<const EffectPotential*> active;
  active.push_back(&effects[0]);
  active.push_back(&effects[1]);
  for (int i = 0; i < m.num_obstacles(); ++i) {
    if (construal_contains(c, i)) active.push_back(&effects[2 + i]);
  }

  TabularMdp mdp;
  mdp.num_states = m.size();
  mdp.num_actions = kNumActions;
  mdp.discount = gamma;
  mdp.utility.assign(m.size(), -1.0);
  mdp.utility[m.goal] = 0.0;
  mdp.terminal.assign(m.size(), 0);
  mdp.terminal[m.goal] = 1;
  mdp.rows.resize(static_cast<std::size_t>(m.size()) * kNumActions);

  const Transition goal_self{static_cast<std::int32_t>(m.goal), 1.0};
  const RowRef goal_row = mdp.push_row(std::span<const Transition>(&goal_self, 1));

  std::array<Transition, 2> buf;
  for (int s = 0; s < m.size(); ++s) {
    for (int a = 0; a < kNumActions; ++a) {
      const std::size_t ra = static_cast<std::size_t>(s) * kNumActions + a;
      if (s == m.goal) {
        mdp.rows[ra] = goal_row;
        continue;
      }
      // The Move factor puts weight on at most two cells: the displaced cell
      // and the current one. Every other next state has weight zero, so the
      // normalized product lives on those candidates.
      const Cell d = displaced(m.cell(s), a);
      int n = 0;
      if (m.in_bounds(d) && m.index(d) != s) {
        buf[n++] = {static_cast<std::int32_t>(m.index(d)), 0.0};
      }
      buf[n++] = {static_cast<std::int32_t>(s), 0.0};

      double z = 0.0;
      for (int k = 0; k < n; ++k) {
        double w = 1.0;
        for (const EffectPotential* e : active) w *= effect_weight(*e, m, s, a, buf[k].next);
        buf[k].prob = w;
        z += w;
      }
      if (z <= 0.0) {
        throw ComputationError("compose_construed_mdp: all next-state weights vanished at state " +
                               std::to_string(s));
      }
      int kept = 0;
      for (int k = 0; k < n; ++k) {
        if (buf[k].prob == 0.0) continue;
        buf[kept] = {buf[k].next, buf[k].prob / z};
        ++kept;
      }
      mdp.rows[ra] = mdp.push_row(std::span<const Transition>(buf.data(), kept));
    }
  }
  return mdp;
}

TabularMdp full_mdp(const GridMaze& m, double slip, double gamma) {
  const ConstrualMask all = m.num_obstacles() >= 32
                                ? ~ConstrualMask{0}
                                : (ConstrualMask{1} << m.num_obstacles()) - 1;
  return compose_construed_mdp(m, all, slip, gamma);
}

}  // namespace construal
