#include "construal/vor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace construal {

PlanResult plan_with_construal(const GridMaze& m, ConstrualMask c, double slip, double gamma,
                               double vi_tol, double tie_tol) {
  const TabularMdp mdp = compose_construed_mdp(m, c, slip, gamma);
  ValueIterationResult vi = value_iteration(mdp, vi_tol);
  PlanResult out;
  out.plan = optimal_stochastic_policy(vi.q, mdp, tie_tol);
  out.v = std::move(vi.v);
  out.q = std::move(vi.q);
  return out;
}

double behavioral_utility(const GridMaze& m, const Policy& plan, double slip, double gamma) {
  const TabularMdp full = full_mdp(m, slip, gamma);
  const ValueFunction v = policy_evaluation_exact(full, plan);
  return v[static_cast<std::size_t>(m.start)];
}

VorTable vor_table(const GridMaze& m, double slip, double gamma, int max_size, double vi_tol,
                   double tie_tol) {
  const int n = static_cast<int>(m.obstacles.size());
  VorTable table;
  table.n_obstacles = n;

  const TabularMdp full = full_mdp(m, slip, gamma);
  const int start = m.start;

  for (ConstrualMask c : enumerate_construals(n, max_size)) {
    PlanResult planned = plan_with_construal(m, c, slip, gamma, vi_tol, tie_tol);
    const ValueFunction v = policy_evaluation_exact(full, planned.plan);
    VorRecord rec;
    rec.mask = c;
    rec.behavioral_utility = v[static_cast<std::size_t>(start)];
    rec.cost = static_cast<double>(construal_size(c));
    rec.vor = rec.behavioral_utility - rec.cost;
    rec.plan = std::move(planned.plan);
    table.records.push_back(std::move(rec));
  }
  return table;
}

std::vector<double> construal_distribution(const VorTable& table, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("construal_distribution: alpha must be > 0");
  if (table.records.empty()) return {};
  double best = table.records.front().vor;
  for (const VorRecord& r : table.records) best = std::max(best, r.vor);
  std::vector<double> dist(table.records.size());
  double z = 0.0;
  for (std::size_t i = 0; i < table.records.size(); ++i) {
    dist[i] = std::exp((table.records[i].vor - best) / alpha);
    z += dist[i];
  }
  for (double& d : dist) d /= z;
  return dist;
}

std::vector<double> obstacle_marginals(const VorTable& table, const std::vector<double>& dist) {
  if (dist.size() != table.records.size())
    throw std::invalid_argument("obstacle_marginals: distribution/table size mismatch");
  std::vector<double> marg(static_cast<std::size_t>(table.n_obstacles), 0.0);
  for (std::size_t i = 0; i < table.records.size(); ++i)
    for (int ob = 0; ob < table.n_obstacles; ++ob)
      if (construal_contains(table.records[i].mask, ob)) marg[static_cast<std::size_t>(ob)] += dist[i];
  // Partial sums of a normalized distribution; pin summation roundoff inside [0,1].
  for (double& p : marg) p = std::clamp(p, 0.0, 1.0);
  return marg;
}

}  // namespace construal
