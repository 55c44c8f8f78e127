#include "construal/analysis.hpp"

#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace construal {
namespace {

struct Column {
  const char* name;
  double PredictorRow::*field;
};

constexpr Column kColumns[] = {
    {"vgc", &PredictorRow::vgc},
    {"vgc_mod", &PredictorRow::vgc_mod},
    {"traj_hs", &PredictorRow::traj_hs},
    {"graph_hs", &PredictorRow::graph_hs},
    {"bottleneck", &PredictorRow::bottleneck},
    {"sr_overlap", &PredictorRow::sr_overlap},
    {"opt_dist", &PredictorRow::opt_dist},
    {"goal_dist", &PredictorRow::goal_dist},
    {"start_dist", &PredictorRow::start_dist},
    {"wall_dist", &PredictorRow::wall_dist},
    {"center_dist", &PredictorRow::center_dist},
};

struct NavColumn {
  const char* name;
  std::optional<double> PredictorRow::*field;
};

constexpr NavColumn kNavColumns[] = {
    {"nav_dist", &PredictorRow::nav_dist},
    {"nav_dist_step", &PredictorRow::nav_dist_step},
};

struct Moments {
  double mean = 0.0;
  double sd = 0.0;  // population convention: divide by n
};

Moments population_moments(const std::vector<double>& xs) {
  Moments m;
  const double n = static_cast<double>(xs.size());
  for (double x : xs) m.mean += x;
  m.mean /= n;
  double ss = 0.0;
  for (double x : xs) {
    const double d = x - m.mean;
    ss += d * d;
  }
  m.sd = std::sqrt(ss / n);
  return m;
}

}  // namespace

OlsFit ols_r2(const std::vector<double>& predictor, const std::vector<double>& responses) {
  if (predictor.size() != responses.size()) {
    throw std::invalid_argument("ols_r2: column lengths differ (" +
                                std::to_string(predictor.size()) + " vs " +
                                std::to_string(responses.size()) + ")");
  }
  const std::size_t n = predictor.size();
  if (n < 3) throw std::invalid_argument("ols_r2: need at least 3 paired points");

  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += predictor[i];
    my += responses[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);

  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = predictor[i] - mx;
    const double dy = responses[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("ols_r2: predictor column has zero variance");

  OlsFit fit;
  fit.n = n;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (syy > 0.0) {
    const double r2 = (sxy * sxy) / (sxx * syy);
    fit.r_squared = std::min(1.0, std::max(0.0, r2));
  } else {
    // Constant responses: the flat fit is exact but explains no variance.
    fit.r_squared = 0.0;
  }
  return fit;
}

PredictorTable zscore(const PredictorTable& table, std::vector<std::string>* constant_columns) {
  PredictorTable out = table;
  const std::size_t n = out.rows.size();
  if (n == 0) return out;

  std::vector<double> values(n);
  for (const Column& col : kColumns) {
    for (std::size_t i = 0; i < n; ++i) values[i] = out.rows[i].*col.field;
    const Moments m = population_moments(values);
    if (m.sd > 0.0) {
      for (std::size_t i = 0; i < n; ++i) out.rows[i].*col.field = (values[i] - m.mean) / m.sd;
    } else {
      for (std::size_t i = 0; i < n; ++i) out.rows[i].*col.field = 0.0;
      if (constant_columns) constant_columns->push_back(col.name);
    }
  }

  for (const NavColumn& col : kNavColumns) {
    std::size_t present = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if ((out.rows[i].*col.field).has_value()) ++present;
    }
    if (present == 0) continue;
    if (present < n) {
      if (constant_columns) {
        constant_columns->push_back(std::string(col.name) + " (partial: present in " +
                                    std::to_string(present) + " of " + std::to_string(n) +
                                    " rows; left unnormalized)");
      }
      continue;
    }
    for (std::size_t i = 0; i < n; ++i) values[i] = *(out.rows[i].*col.field);
    const Moments m = population_moments(values);
    if (m.sd > 0.0) {
      for (std::size_t i = 0; i < n; ++i) out.rows[i].*col.field = (values[i] - m.mean) / m.sd;
    } else {
      for (std::size_t i = 0; i < n; ++i) out.rows[i].*col.field = 0.0;
      if (constant_columns) constant_columns->push_back(col.name);
    }
  }
  return out;
}

AnalyzeResult analyze(const PredictorTable& table, const ResponseTable& responses,
                      bool zscore_predictors) {
  AnalyzeResult out;

  PredictorTable preds = table;
  if (zscore_predictors) {
    std::vector<std::string> constant;
    preds = zscore(table, &constant);
    for (const std::string& name : constant) {
      out.warnings.push_back("zscore: column " + name + " has zero variance, passed through as zeros");
    }
  }

  std::map<std::pair<std::string, int>, std::size_t> row_index;
  for (std::size_t i = 0; i < preds.rows.size(); ++i) {
    const auto key = std::make_pair(preds.rows[i].maze_id, preds.rows[i].obstacle_id);
    if (!row_index.emplace(key, i).second) {
      throw std::invalid_argument("analyze: duplicate predictor row for maze '" + key.first +
                                  "' obstacle " + std::to_string(key.second));
    }
  }

  // Measures keep their order of first appearance in the response table.
  std::vector<std::string> measure_order;
  std::map<std::string, std::vector<std::size_t>> measure_rows;
  for (std::size_t i = 0; i < responses.size(); ++i) {
    auto [it, inserted] = measure_rows.try_emplace(responses[i].measure);
    if (inserted) measure_order.push_back(responses[i].measure);
    it->second.push_back(i);
  }

  for (const std::string& measure : measure_order) {
    std::vector<std::size_t> paired;  // predictor row index per response row
    std::vector<double> y;
    for (std::size_t ri : measure_rows[measure]) {
      const ResponseRow& r = responses[ri];
      const auto it = row_index.find(std::make_pair(r.maze_id, r.obstacle_id));
      if (it == row_index.end()) {
        throw std::invalid_argument("analyze: response row (maze '" + r.maze_id + "', obstacle " +
                                    std::to_string(r.obstacle_id) + ", measure '" + measure +
                                    "') has no matching predictor row");
      }
      paired.push_back(it->second);
      y.push_back(r.mean_response);
    }
    if (paired.size() < 3) {
      throw std::invalid_argument("analyze: measure '" + measure + "' has only " +
                                  std::to_string(paired.size()) + " paired rows (need 3)");
    }

    std::vector<double> x(paired.size());
    for (const Column& col : kColumns) {
      for (std::size_t i = 0; i < paired.size(); ++i) x[i] = preds.rows[paired[i]].*col.field;
      const Moments m = population_moments(x);
      if (!(m.sd > 0.0)) {
        out.warnings.push_back("analyze: predictor " + std::string(col.name) + " skipped for measure '" +
                               measure + "': zero variance over paired rows");
        continue;
      }
      out.records.push_back({col.name, measure, ols_r2(x, y)});
    }
    for (const NavColumn& col : kNavColumns) {
      std::size_t present = 0;
      for (std::size_t ri : paired) {
        if ((preds.rows[ri].*col.field).has_value()) ++present;
      }
      if (present == 0) continue;
      if (present < paired.size()) {
        out.warnings.push_back("analyze: predictor " + std::string(col.name) + " skipped for measure '" +
                               measure + "': value missing in " +
                               std::to_string(paired.size() - present) + " of " +
                               std::to_string(paired.size()) + " paired rows");
        continue;
      }
      for (std::size_t i = 0; i < paired.size(); ++i) x[i] = *(preds.rows[paired[i]].*col.field);
      const Moments m = population_moments(x);
      if (!(m.sd > 0.0)) {
        out.warnings.push_back("analyze: predictor " + std::string(col.name) + " skipped for measure '" +
                               measure + "': zero variance over paired rows");
        continue;
      }
      out.records.push_back({col.name, measure, ols_r2(x, y)});
    }
  }
  return out;
}

}  // namespace construal
