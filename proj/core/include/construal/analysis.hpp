#pragma once

// Pooled OLS analysis of predictor tables against behavioral response tables,
// plus the z-score normalization applied to predictor columns beforehand.
//
// Conventions (also documented in the README):
//   - z-scores use the population standard deviation (divide by n, not n-1).
//   - Distance predictors keep their natural sign (lower = nearer); slopes are
//     reported signed so the direction of each effect is explicit.

#include <string>
#include <vector>

#include "construal/predictor_table.hpp"

namespace construal {

// Ordinary-least-squares fit of responses on a single predictor column.
struct OlsFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t n = 0;
};

// Simple linear regression of `responses` on `predictor`.
//
// Throws std::invalid_argument when fewer than 3 paired points are given,
// when the two columns differ in length, or when the predictor column has
// zero variance. A zero-variance *response* column is legal and yields
// r_squared = 0 (slope 0 fits it exactly but explains nothing).
OlsFit ols_r2(const std::vector<double>& predictor, const std::vector<double>& responses);

// Z-scores every numeric predictor column of `table` in place of its raw
// values: (x - mean) / sd with the population sd. Columns with zero variance
// pass through as all-zeros and their names are appended to
// `constant_columns` when it is non-null. Optional nav columns are z-scored
// only when present in every row; partially-present nav columns pass through
// untouched (they cannot be normalized consistently) and are reported via
// `constant_columns` with a "partial" note.
//
// Applying zscore twice is idempotent up to floating-point noise.
PredictorTable zscore(const PredictorTable& table,
                      std::vector<std::string>* constant_columns = nullptr);

// One regression result: `measure` responses against predictor column
// `predictor` over all (maze_id, obstacle_id) pairs present in both tables.
struct AnalysisRecord {
  std::string predictor;
  std::string measure;
  OlsFit fit;
};

struct AnalyzeResult {
  std::vector<AnalysisRecord> records;
  // Human-readable notes: skipped columns (zero variance, or nav columns not
  // present for every paired row). Nothing is filtered silently.
  std::vector<std::string> warnings;
};

// Regresses every response measure on every predictor column.
//
// Rows are paired by exact (maze_id, obstacle_id) match; a response row with
// no matching predictor row is an error (std::invalid_argument), as is a
// measure with fewer than 3 paired rows. Measures appear in order of first
// appearance in `responses`; predictors in CSV column order. When
// `zscore_predictors` is set the predictor columns are z-scored across the
// full table before pairing (this changes slopes/intercepts, never R²).
//
// The R² reported for a (predictor, measure) record equals ols_r2 applied to
// the same two columns extracted by hand: no hidden filtering happens here.
// Predictor columns with zero variance over the paired rows are skipped with
// a warning instead of producing a record.
AnalyzeResult analyze(const PredictorTable& table, const ResponseTable& responses,
                      bool zscore_predictors = true);

}  // namespace construal
