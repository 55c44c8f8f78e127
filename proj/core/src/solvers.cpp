#include "construal/solvers.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <Eigen/IterativeLinearSolvers>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace construal {
namespace {

double q_value(const TabularMdp& mdp, const ValueFunction& v, int s, int a) {
  double acc = 0.0;
  for (const Transition& t : mdp.row(s, a)) acc += t.prob * v[t.next];
  return mdp.utility[s] + mdp.act_reward(s, a) + mdp.discount * acc;
}

// P_pi with terminal rows zeroed, as an Eigen sparse matrix.
Eigen::SparseMatrix<double> policy_chain(const TabularMdp& mdp, const Policy& pi, bool transpose) {
  std::vector<Eigen::Triplet<double>> trips;
  for (int s = 0; s < mdp.num_states; ++s) {
    if (mdp.terminal[s]) continue;
    for (int a = 0; a < mdp.num_actions; ++a) {
      const double pa = pi(s, a);
      if (pa == 0.0) continue;
      for (const Transition& t : mdp.row(s, a)) {
        if (t.prob == 0.0) continue;
        if (transpose) {
          trips.emplace_back(t.next, s, pa * t.prob);
        } else {
          trips.emplace_back(s, t.next, pa * t.prob);
        }
      }
    }
  }
  Eigen::SparseMatrix<double> p(mdp.num_states, mdp.num_states);
  p.setFromTriplets(trips.begin(), trips.end());
  return p;
}

Eigen::VectorXd solve_linear_system(const Eigen::SparseMatrix<double>& a, const Eigen::VectorXd& b,
                                    int iterative_threshold, double iterative_tol, const char* who) {
  if (a.rows() < iterative_threshold) {
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(a);
    if (lu.info() != Eigen::Success) {
      throw ComputationError(std::string(who) + ": sparse factorization failed (singular system)");
    }
    Eigen::VectorXd x = lu.solve(b);
    if (lu.info() != Eigen::Success) {
      throw ComputationError(std::string(who) + ": sparse solve failed");
    }
    return x;
  }
  Eigen::BiCGSTAB<Eigen::SparseMatrix<double>> it;
  it.setTolerance(iterative_tol);
  it.setMaxIterations(200000);
  it.compute(a);
  Eigen::VectorXd x = it.solve(b);
  if (it.info() != Eigen::Success) {
    throw ComputationError(std::string(who) + ": iterative solve stalled at residual " +
                           std::to_string(it.error()));
  }
  return x;
}

double sample_uniform(std::mt19937_64& rng) {
  // 53-bit mantissa draw; avoids distribution objects so streams depend only on
  // the engine, not on the standard library version.
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int sample_categorical(std::span<const Transition> row, std::mt19937_64& rng) {
  const double u = sample_uniform(rng);
  double acc = 0.0;
  int last = -1;
  for (const Transition& t : row) {
    if (t.prob <= 0.0) continue;
    acc += t.prob;
    last = t.next;
    if (u < acc) return t.next;
  }
  return last;  // numeric slack: u landed in the rounding gap at the top
}

int sample_action(const Policy& pi, int s, std::mt19937_64& rng) {
  const double u = sample_uniform(rng);
  double acc = 0.0;
  int last = -1;
  for (int a = 0; a < pi.cols; ++a) {
    const double p = pi(s, a);
    if (p <= 0.0) continue;
    acc += p;
    last = a;
    if (u < acc) return a;
  }
  return last;
}

}  // namespace

ValueIterationResult value_iteration(const TabularMdp& mdp, double tol, int max_iters) {
  ValueFunction v(mdp.num_states, 0.0);
  for (int s = 0; s < mdp.num_states; ++s) {
    if (mdp.terminal[s]) v[s] = mdp.utility[s];
  }
  double residual = 0.0;
  int iter = 0;
  for (; iter < max_iters; ++iter) {
    residual = 0.0;
    for (int s = 0; s < mdp.num_states; ++s) {
      if (mdp.terminal[s]) continue;
      double best = -std::numeric_limits<double>::infinity();
      for (int a = 0; a < mdp.num_actions; ++a) best = std::max(best, q_value(mdp, v, s, a));
      residual = std::max(residual, std::abs(best - v[s]));
      v[s] = best;
    }
    if (residual < tol) break;
  }
  if (residual >= tol) {
    throw ComputationError("value_iteration: no convergence after " + std::to_string(max_iters) +
                           " iterations, residual " + std::to_string(residual));
  }
  QFunction q(mdp.num_states, mdp.num_actions);
  for (int s = 0; s < mdp.num_states; ++s) {
    for (int a = 0; a < mdp.num_actions; ++a) {
      q(s, a) = mdp.terminal[s] ? mdp.utility[s] : q_value(mdp, v, s, a);
    }
  }
  return {std::move(v), std::move(q), iter + 1, residual};
}

ValueFunction policy_evaluation_exact(const TabularMdp& mdp, const Policy& pi,
                                      int iterative_threshold, double iterative_tol) {
  const int n = mdp.num_states;
  Eigen::SparseMatrix<double> p = policy_chain(mdp, pi, /*transpose=*/false);
  Eigen::SparseMatrix<double> id(n, n);
  id.setIdentity();
  Eigen::SparseMatrix<double> a = id - mdp.discount * p;

  Eigen::VectorXd r(n);
  for (int s = 0; s < n; ++s) {
    double rs = mdp.utility[s];
    if (!mdp.terminal[s] && !mdp.action_reward.empty()) {
      for (int act = 0; act < mdp.num_actions; ++act) rs += pi(s, act) * mdp.act_reward(s, act);
    }
    r[s] = rs;
  }
  Eigen::VectorXd x = solve_linear_system(a, r, iterative_threshold, iterative_tol, "policy_evaluation_exact");
  return ValueFunction(x.data(), x.data() + n);
}

Policy optimal_stochastic_policy(const QFunction& q, const TabularMdp& mdp, double tie_tol) {
  Policy pi(q.rows, q.cols);
  for (int s = 0; s < q.rows; ++s) {
    if (mdp.terminal[s]) {
      for (int a = 0; a < q.cols; ++a) pi(s, a) = 1.0 / q.cols;
      continue;
    }
    double best = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < q.cols; ++a) best = std::max(best, q(s, a));
    int count = 0;
    for (int a = 0; a < q.cols; ++a) {
      if (q(s, a) >= best - tie_tol) ++count;
    }
    for (int a = 0; a < q.cols; ++a) {
      if (q(s, a) >= best - tie_tol) pi(s, a) = 1.0 / count;
    }
  }
  return pi;
}

Policy eps_softmax_policy(const QFunction& q, double inv_temp, double eps) {
  if (!(inv_temp >= 0.0) || !(eps >= 0.0 && eps <= 1.0)) {
    throw ComputationError("eps_softmax_policy: need inv_temp >= 0 and eps in [0, 1]");
  }
  Policy pi(q.rows, q.cols);
  for (int s = 0; s < q.rows; ++s) {
    double mx = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < q.cols; ++a) mx = std::max(mx, q(s, a));
    double z = 0.0;
    for (int a = 0; a < q.cols; ++a) z += std::exp(inv_temp * (q(s, a) - mx));
    for (int a = 0; a < q.cols; ++a) {
      pi(s, a) = eps / q.cols + (1.0 - eps) * std::exp(inv_temp * (q(s, a) - mx)) / z;
    }
  }
  return pi;
}

QFunction q_from_v(const TabularMdp& mdp, const ValueFunction& v) {
  QFunction q(mdp.num_states, mdp.num_actions);
  for (int s = 0; s < mdp.num_states; ++s) {
    for (int a = 0; a < mdp.num_actions; ++a) {
      q(s, a) = mdp.terminal[s] ? mdp.utility[s] : q_value(mdp, v, s, a);
    }
  }
  return q;
}

PolicyIterationResult policy_iteration_sparse(const TabularMdp& mdp, int max_iters) {
  std::vector<int> choice(mdp.num_states, 0);
  Policy pi(mdp.num_states, mdp.num_actions);
  for (int s = 0; s < mdp.num_states; ++s) pi(s, 0) = 1.0;

  ValueFunction v;
  for (int iter = 0; iter < max_iters; ++iter) {
    v = policy_evaluation_exact(mdp, pi);
    bool changed = false;
    for (int s = 0; s < mdp.num_states; ++s) {
      if (mdp.terminal[s]) continue;
      int best_a = 0;
      double best = -std::numeric_limits<double>::infinity();
      for (int a = 0; a < mdp.num_actions; ++a) {
        const double qa = q_value(mdp, v, s, a);
        if (qa > best) {
          best = qa;
          best_a = a;
        }
      }
      // Strict improvement over the incumbent's Q keeps the iteration monotone
      // and immune to floating-point ping-pong between equal-value actions.
      if (best_a != choice[s] && best > q_value(mdp, v, s, choice[s]) + 1e-13) {
        pi(s, choice[s]) = 0.0;
        pi(s, best_a) = 1.0;
        choice[s] = best_a;
        changed = true;
      }
    }
    if (!changed) return {std::move(pi), std::move(v), iter + 1};
  }
  throw ComputationError("policy_iteration_sparse: no convergence after " + std::to_string(max_iters) +
                         " iterations");
}

Matrix successor_representation(const TabularMdp& mdp, const Policy& pi) {
  const int n = mdp.num_states;
  if (n > 4096) {
    throw ComputationError("successor_representation: dense inverse refused for " + std::to_string(n) +
                           " states; use successor_row");
  }
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - mdp.discount * Eigen::MatrixXd(policy_chain(mdp, pi, false));
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  Eigen::MatrixXd m = lu.solve(Eigen::MatrixXd::Identity(n, n));
  Matrix out(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out(i, j) = m(i, j);
  }
  return out;
}

ValueFunction successor_row(const TabularMdp& mdp, const Policy& pi, int start) {
  const int n = mdp.num_states;
  Eigen::SparseMatrix<double> pt = policy_chain(mdp, pi, /*transpose=*/true);
  Eigen::SparseMatrix<double> id(n, n);
  id.setIdentity();
  Eigen::SparseMatrix<double> a = id - mdp.discount * pt;
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  e[start] = 1.0;
  Eigen::VectorXd y = solve_linear_system(a, e, 50000, 1e-12, "successor_row");
  return ValueFunction(y.data(), y.data() + n);
}

Trajectory sample_trajectory(const TabularMdp& mdp, const Policy& pi, int start,
                             std::uint64_t seed, int max_steps) {
  std::mt19937_64 rng(seed);
  Trajectory tr;
  tr.states.push_back(start);
  int s = start;
  for (int step = 0; step < max_steps && !mdp.terminal[s]; ++step) {
    const int a = sample_action(pi, s, rng);
    const int next = sample_categorical(mdp.row(s, a), rng);
    tr.actions.push_back(a);
    tr.states.push_back(next);
    s = next;
  }
  return tr;
}

}  // namespace construal
