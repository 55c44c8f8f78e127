#include "construal/meta.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <stdexcept>

namespace construal {
namespace {

int obstacle_count(const std::vector<ConstrualMask>& construals) {
  ConstrualMask all = 0;
  for (ConstrualMask c : construals) all |= c;
  return std::bit_width(all);
}

}  // namespace

MetaMdp build_meta_mdp_from_policies(const TabularMdp& base, int start_state,
                                     const std::vector<ConstrualMask>& construals,
                                     const std::vector<Policy>& base_policies) {
  if (construals.empty() || base_policies.size() != construals.size()) {
    throw std::invalid_argument("build_meta_mdp_from_policies: need one policy per construal");
  }
  const int s_count = base.num_states;
  const int c_count = static_cast<int>(construals.size());

  MetaMdp meta;
  meta.construals = construals;
  meta.n_base_states = s_count;
  meta.start_state = start_state;
  meta.empty_index = -1;
  for (int ci = 0; ci < c_count; ++ci) {
    if (construals[ci] == 0) meta.empty_index = ci;
  }
  if (meta.empty_index < 0) {
    throw std::invalid_argument("build_meta_mdp_from_policies: candidate set lacks the empty construal");
  }

  TabularMdp& mdp = meta.mdp;
  mdp.num_states = s_count * c_count;
  mdp.num_actions = c_count;
  mdp.discount = base.discount;
  mdp.utility.resize(static_cast<std::size_t>(mdp.num_states));
  mdp.terminal.resize(static_cast<std::size_t>(mdp.num_states));
  mdp.action_reward.assign(static_cast<std::size_t>(mdp.num_states) * c_count, 0.0);
  for (int s = 0; s < s_count; ++s) {
    for (int ci = 0; ci < c_count; ++ci) {
      const std::size_t ms = static_cast<std::size_t>(meta.index(s, ci));
      mdp.utility[ms] = base.utility[s];
      mdp.terminal[ms] = base.terminal[s];
      if (base.terminal[s]) continue;
      for (int cj = 0; cj < c_count; ++cj) {
        mdp.action_reward[ms * c_count + cj] =
            -static_cast<double>(construal_added(construals[ci], construals[cj]));
      }
    }
  }

  // One stored row per (cell, chosen construal); every current construal aliases it.
  std::vector<RowRef> shared(static_cast<std::size_t>(s_count) * c_count);
  std::vector<Transition> scratch;
  std::map<int, double> mixed;
  for (int s = 0; s < s_count; ++s) {
    for (int cj = 0; cj < c_count; ++cj) {
      scratch.clear();
      if (base.terminal[s]) {
        scratch.push_back({meta.index(s, cj), 1.0});
      } else {
        mixed.clear();
        const Policy& pi = base_policies[static_cast<std::size_t>(cj)];
        for (int a = 0; a < base.num_actions; ++a) {
          const double pa = pi(s, a);
          if (pa == 0.0) continue;
          for (const Transition& t : base.row(s, a)) mixed[t.next] += pa * t.prob;
        }
        for (const auto& [next, prob] : mixed) {
          if (prob > 0.0) scratch.push_back({meta.index(next, cj), prob});
        }
      }
      shared[static_cast<std::size_t>(s) * c_count + cj] = mdp.push_row(scratch);
    }
  }
  mdp.rows.resize(static_cast<std::size_t>(mdp.num_states) * c_count);
  for (int s = 0; s < s_count; ++s) {
    for (int ci = 0; ci < c_count; ++ci) {
      const std::size_t ms = static_cast<std::size_t>(meta.index(s, ci));
      for (int cj = 0; cj < c_count; ++cj) {
        mdp.rows[ms * c_count + cj] = shared[static_cast<std::size_t>(s) * c_count + cj];
      }
    }
  }
  return meta;
}

MetaMdp build_meta_mdp(const GridMaze& m, const MetaConfig& cfg) {
  const TabularMdp base = full_mdp(m, cfg.slip, cfg.gamma);
  const std::vector<ConstrualMask> candidates =
      enumerate_construals(static_cast<int>(m.obstacles.size()), cfg.max_size);
  std::vector<Policy> policies;
  policies.reserve(candidates.size());
  for (ConstrualMask c : candidates) {
    const TabularMdp construed = compose_construed_mdp(m, c, cfg.slip, cfg.gamma);
    ValueIterationResult vi = value_iteration(construed, cfg.vi_tol);
    policies.push_back(cfg.action_noise
                           ? eps_softmax_policy(vi.q, cfg.action_inv_temp, cfg.action_eps)
                           : optimal_stochastic_policy(vi.q, construed, cfg.tie_tol));
  }
  return build_meta_mdp_from_policies(base, m.start, candidates, policies);
}

MetaSolveResult solve_meta(const MetaMdp& meta) {
  PolicyIterationResult pi = policy_iteration_sparse(meta.mdp);
  MetaSolveResult out;
  out.q = q_from_v(meta.mdp, pi.v);
  out.v = std::move(pi.v);
  out.iterations = pi.iterations;
  return out;
}

Policy construal_switch_policy(const MetaMdp& meta, const MetaSolveResult& solved,
                               double inv_temp, double eps) {
  // q already equals U(s) + [gamma * E V - switch cost]; the per-row constant
  // U(s) drops out of the softmax, so this matches the switch-value softmax.
  (void)meta;
  return eps_softmax_policy(solved.q, inv_temp, eps);
}

namespace {

// Reattributes per-meta-state mass according to cfg, zeroing terminal entries
// when excluded. in_use credits each visit to the construal chosen at the
// state; terminal visits keep the construal they arrived with (nothing is
// chosen there).
std::vector<double> reattribute(const MetaMdp& meta, const Policy& switch_pi,
                                std::vector<double> mass, const OccupancyConfig& cfg) {
  const int c_count = static_cast<int>(meta.construals.size());
  if (cfg.attribution == Attribution::kInUse) {
    std::vector<double> shifted(mass.size(), 0.0);
    for (int s = 0; s < meta.n_base_states; ++s) {
      for (int ci = 0; ci < c_count; ++ci) {
        const int ms = meta.index(s, ci);
        const double w = mass[static_cast<std::size_t>(ms)];
        if (w == 0.0) continue;
        if (meta.mdp.terminal[static_cast<std::size_t>(ms)]) {
          shifted[static_cast<std::size_t>(ms)] += w;
          continue;
        }
        for (int cj = 0; cj < c_count; ++cj) {
          const double p = switch_pi(ms, cj);
          if (p > 0.0) shifted[static_cast<std::size_t>(meta.index(s, cj))] += w * p;
        }
      }
    }
    mass = std::move(shifted);
  }
  if (!cfg.include_terminal) {
    for (std::size_t ms = 0; ms < mass.size(); ++ms) {
      if (meta.mdp.terminal[ms]) mass[ms] = 0.0;
    }
  }
  return mass;
}

std::vector<double> normalized(const std::vector<double>& mass) {
  double total = 0.0;
  for (double m : mass) total += m;
  if (total <= 0.0) throw ComputationError("meta occupancy: total visit mass is zero");
  std::vector<double> rho(mass.size());
  for (std::size_t i = 0; i < mass.size(); ++i) rho[i] = mass[i] / total;
  return rho;
}

}  // namespace

OccupancyResult meta_occupancy_exact(const MetaMdp& meta, const Policy& switch_pi,
                                     const OccupancyConfig& cfg) {
  OccupancyResult out;
  out.visits = reattribute(meta, switch_pi,
                           successor_row(meta.mdp, switch_pi, meta.start_index()), cfg);
  out.rho = normalized(out.visits);
  return out;
}

OccupancyResult meta_occupancy_rollout(const MetaMdp& meta, const Policy& switch_pi,
                                       const OccupancyConfig& cfg) {
  if (cfg.n_rollouts <= 1) throw std::invalid_argument("meta_occupancy_rollout: need n_rollouts > 1");
  const int c_count = static_cast<int>(meta.construals.size());
  const int n_obs = obstacle_count(meta.construals);
  const std::size_t n_meta = static_cast<std::size_t>(meta.mdp.num_states);
  const double gamma = meta.mdp.discount;

  std::vector<double> sum_w(n_meta, 0.0), sum_w2(n_meta, 0.0);
  std::vector<double> w(n_meta, 0.0);
  std::vector<int> touched;
  std::vector<std::vector<double>> hits(static_cast<std::size_t>(n_obs));
  for (auto& h : hits) h.assign(static_cast<std::size_t>(cfg.n_rollouts), 0.0);
  std::vector<double> totals(static_cast<std::size_t>(cfg.n_rollouts), 0.0);

  OccupancyResult out;
  for (int k = 0; k < cfg.n_rollouts; ++k) {
    const Trajectory tr = sample_trajectory(meta.mdp, switch_pi, meta.start_index(),
                                            mix_seed(cfg.seed, static_cast<std::uint64_t>(k)),
                                            cfg.max_steps);
    const int last = static_cast<int>(tr.states.size()) - 1;
    if (!meta.mdp.terminal[static_cast<std::size_t>(tr.states[static_cast<std::size_t>(last)])]) {
      ++out.truncated_rollouts;
    }
    double disc = 1.0;
    for (int t = 0; t <= last; ++t, disc *= gamma) {
      const int ms = tr.states[static_cast<std::size_t>(t)];
      const bool term = meta.mdp.terminal[static_cast<std::size_t>(ms)] != 0;
      if (term && !cfg.include_terminal) continue;
      int ci = ms % c_count;  // construal held on arrival
      if (cfg.attribution == Attribution::kInUse && t < last && !term) {
        ci = tr.actions[static_cast<std::size_t>(t)];
      }
      const int attributed = meta.index(ms / c_count, ci);
      if (w[static_cast<std::size_t>(attributed)] == 0.0) touched.push_back(attributed);
      w[static_cast<std::size_t>(attributed)] += disc;
      totals[static_cast<std::size_t>(k)] += disc;
      for (int ob = 0; ob < n_obs; ++ob) {
        if (construal_contains(meta.construals[static_cast<std::size_t>(ci)], ob)) {
          hits[static_cast<std::size_t>(ob)][static_cast<std::size_t>(k)] += disc;
        }
      }
    }
    for (int ms : touched) {
      sum_w[static_cast<std::size_t>(ms)] += w[static_cast<std::size_t>(ms)];
      sum_w2[static_cast<std::size_t>(ms)] += w[static_cast<std::size_t>(ms)] * w[static_cast<std::size_t>(ms)];
      w[static_cast<std::size_t>(ms)] = 0.0;
    }
    touched.clear();
  }

  const double n = static_cast<double>(cfg.n_rollouts);
  out.visits.resize(n_meta);
  out.visit_se.resize(n_meta);
  for (std::size_t ms = 0; ms < n_meta; ++ms) {
    const double mean = sum_w[ms] / n;
    const double var = std::max(0.0, (sum_w2[ms] - n * mean * mean) / (n - 1.0));
    out.visits[ms] = mean;
    out.visit_se[ms] = std::sqrt(var / n);
  }
  out.rho = normalized(out.visits);

  double total_mean = 0.0;
  for (double t : totals) total_mean += t;
  total_mean /= n;
  out.score_se.resize(static_cast<std::size_t>(n_obs));
  for (int ob = 0; ob < n_obs; ++ob) {
    double hit_mean = 0.0;
    for (double h : hits[static_cast<std::size_t>(ob)]) hit_mean += h;
    hit_mean /= n;
    const double ratio = total_mean > 0.0 ? hit_mean / total_mean : 0.0;
    // Delta-method standard error for the ratio-of-means score estimator.
    double ss = 0.0;
    for (int k = 0; k < cfg.n_rollouts; ++k) {
      const double d = hits[static_cast<std::size_t>(ob)][static_cast<std::size_t>(k)] -
                       ratio * totals[static_cast<std::size_t>(k)];
      ss += d * d;
    }
    out.score_se[static_cast<std::size_t>(ob)] =
        total_mean > 0.0 ? std::sqrt(ss / (n - 1.0) / n) / total_mean : 0.0;
  }
  return out;
}

std::vector<double> obstacle_modification_scores(const MetaMdp& meta, const OccupancyResult& occ) {
  const int c_count = static_cast<int>(meta.construals.size());
  const int n_obs = obstacle_count(meta.construals);
  if (occ.rho.size() != static_cast<std::size_t>(meta.mdp.num_states)) {
    throw std::invalid_argument("obstacle_modification_scores: occupancy/meta size mismatch");
  }
  std::vector<double> scores(static_cast<std::size_t>(n_obs), 0.0);
  for (std::size_t ms = 0; ms < occ.rho.size(); ++ms) {
    const ConstrualMask c = meta.construals[ms % static_cast<std::size_t>(c_count)];
    if (c == 0 || occ.rho[ms] == 0.0) continue;
    for (int ob = 0; ob < n_obs; ++ob) {
      if (construal_contains(c, ob)) scores[static_cast<std::size_t>(ob)] += occ.rho[ms];
    }
  }
  // Partial sums of the normalized occupancy; pin summation roundoff inside [0,1].
  for (double& s : scores) s = std::clamp(s, 0.0, 1.0);
  return scores;
}

}  // namespace construal
