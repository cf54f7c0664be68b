#pragma once

#include "config.hpp"

namespace bench {

// Each command writes its CSV files and a manifest.json under config.out.

/// Train BMPS weights for every (size, cost) cell; writes one weights record
/// per cell plus train_trace.csv and train_summary.csv.
void cmd_train(const ExperimentConfig& config);

/// Evaluate the configured policies on every cell; writes results.csv and
/// comparisons.csv (paired, bmps against each other policy).
void cmd_evaluate(const ExperimentConfig& config);

/// BMPS against uniform allocation over the (cities, t_sim) grid; writes
/// tornado.csv and nsim.csv.
void cmd_tornado(const ExperimentConfig& config);

/// Stopping-problem VOC regression over the cost grid; writes regression.csv
/// and regression_scatter.csv.
void cmd_regress(const ExperimentConfig& config);

/// Backward induction for every cell; writes one value table per cell and
/// solve.csv.
void cmd_solve(const ExperimentConfig& config);

}  // namespace bench
