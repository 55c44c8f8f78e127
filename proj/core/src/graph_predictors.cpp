#include "construal/graph_predictors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace construal {

std::vector<double> sr_overlap(const GridMaze& m, double slip, double gamma, double vi_tol,
                               double tie_tol) {
  const GridMaze free = strip_obstacles(m);
  const TabularMdp mdp = full_mdp(free, slip, gamma);
  const ValueIterationResult vi = value_iteration(mdp, vi_tol);
  const Policy pi = optimal_stochastic_policy(vi.q, mdp, tie_tol);
  const Matrix sr = successor_representation(mdp, pi);

  std::vector<double> scores(static_cast<std::size_t>(m.num_obstacles()), 0.0);
  for (int i = 0; i < m.num_obstacles(); ++i) {
    for (int cell : m.obstacles[static_cast<std::size_t>(i)]) {
      scores[static_cast<std::size_t>(i)] += sr(m.start, cell);
    }
  }
  return scores;
}

namespace {

int manhattan(Cell a, Cell b) { return std::abs(a.x - b.x) + std::abs(a.y - b.y); }

// -1 / 0 / +1 sign class with a tolerance band around zero, so cells that sit
// exactly on the cut (antisymmetric layouts) join both sides' crossing edges.
int sign_class(double v, double tol = 1e-12) { return v > tol ? 1 : (v < -tol ? -1 : 0); }

}  // namespace

BottleneckResult bottleneck_distance(const GridMaze& m, SpectralMode mode, double slip, double gamma,
                                     double vi_tol, double tie_tol) {
  const TabularMdp mdp = full_mdp(m, slip, gamma);

  // Component of the start under the true dynamics.
  std::vector<int> comp_index(static_cast<std::size_t>(m.size()), -1);
  std::vector<int> members;
  std::deque<int> queue{m.start};
  comp_index[static_cast<std::size_t>(m.start)] = 0;
  while (!queue.empty()) {
    const int s = queue.front();
    queue.pop_front();
    members.push_back(s);
    for (int a = 0; a < mdp.num_actions; ++a) {
      for (const Transition& t : mdp.row(s, a)) {
        if (t.prob <= 0.0 || comp_index[static_cast<std::size_t>(t.next)] >= 0) continue;
        comp_index[static_cast<std::size_t>(t.next)] = 0;
        queue.push_back(t.next);
      }
    }
  }
  // `members` came out in BFS order; renumber in ascending state order so the
  // Laplacian is independent of traversal details.
  std::sort(members.begin(), members.end());
  for (std::size_t i = 0; i < members.size(); ++i) comp_index[static_cast<std::size_t>(members[i])] = static_cast<int>(i);
  if (comp_index[static_cast<std::size_t>(m.goal)] < 0) {
    throw ComputationError("bottleneck_distance: goal unreachable from start");
  }
  const int n = static_cast<int>(members.size());
  if (n < 3) throw ComputationError("bottleneck_distance: component too small to partition");

  // A(s,s') = 1 iff some action reaches s' with positive probability. The
  // diagonal entries (slip keeps P(s|s,a) > 0) cancel out of L = D - A.
  Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const int s = members[static_cast<std::size_t>(i)];
    for (int a = 0; a < mdp.num_actions; ++a) {
      for (const Transition& t : mdp.row(s, a)) {
        if (t.prob > 0.0) adj(i, comp_index[static_cast<std::size_t>(t.next)]) = 1.0;
      }
    }
  }
  // The absorbing goal row reaches only itself, which would leave the goal a
  // pendant (or orphan) vertex and let the spectral cut collapse onto it. The
  // Laplacian needs the undirected movement graph, so keep an edge when either
  // direction moves with positive probability.
  const Eigen::MatrixXd adj_t = adj.transpose();
  adj = adj.cwiseMax(adj_t);
  Eigen::MatrixXd lap = Eigen::MatrixXd(adj.rowwise().sum().asDiagonal()) - adj;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(lap);
  if (eig.info() != Eigen::Success) throw ComputationError("bottleneck_distance: eigensolve failed");
  const int col = mode == SpectralMode::kFiedler ? 1 : n - 2;
  const Eigen::VectorXd vec = eig.eigenvectors().col(col);

  BottleneckResult out;
  out.eigenvector.assign(static_cast<std::size_t>(m.size()), 0.0);
  for (int i = 0; i < n; ++i) out.eigenvector[static_cast<std::size_t>(members[static_cast<std::size_t>(i)])] = vec[i];

  std::vector<std::uint8_t> is_bottleneck(static_cast<std::size_t>(m.size()), 0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (adj(i, j) == 0.0) continue;
      if (sign_class(vec[i]) != sign_class(vec[j])) {
        is_bottleneck[static_cast<std::size_t>(members[static_cast<std::size_t>(i)])] = 1;
        is_bottleneck[static_cast<std::size_t>(members[static_cast<std::size_t>(j)])] = 1;
      }
    }
  }
  for (int s = 0; s < m.size(); ++s) {
    if (is_bottleneck[static_cast<std::size_t>(s)]) out.bottlenecks.push_back(s);
  }
  if (out.bottlenecks.empty()) throw ComputationError("bottleneck_distance: no sign-crossing edge found");

  const ValueIterationResult vi = value_iteration(mdp, vi_tol);
  const Policy pi = optimal_stochastic_policy(vi.q, mdp, tie_tol);
  const ValueFunction visits = successor_row(mdp, pi, m.start);
  for (int s : out.bottlenecks) {
    if (visits[static_cast<std::size_t>(s)] > 1e-12) out.optimal_bottlenecks.push_back(s);
  }
  const std::vector<int>* targets = &out.optimal_bottlenecks;
  if (targets->empty()) {
    out.fallback_used = true;
    targets = &out.bottlenecks;
  }

  out.scores.assign(static_cast<std::size_t>(m.num_obstacles()), 0.0);
  for (int i = 0; i < m.num_obstacles(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (int oc : m.obstacles[static_cast<std::size_t>(i)]) {
      for (int b : *targets) {
        best = std::min(best, static_cast<double>(manhattan(m.cell(oc), m.cell(b))));
      }
    }
    out.scores[static_cast<std::size_t>(i)] = best;
  }
  return out;
}

}  // namespace construal
