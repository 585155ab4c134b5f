#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rmstscreen/coxgam.hpp"
#include "rmstscreen/screening.hpp"
#include "rmstscreen/survdata.hpp"

namespace rmstscreen {

struct IterativeConfig {
  std::optional<std::size_t> q;  // final size; nullopt = floor(n / 2)
  std::size_t max_iterations = 20;
  ScreeningConfig screening;     // its selected_size is the per-step size
  SplineSpec spline;
  std::size_t cvl_grid_size = 50;
  std::size_t cvl_folds = 5;
  CoxLassoOptions lasso;
  std::uint64_t seed = 1;
  std::size_t workers = 0;
};

struct IterationRecord {
  std::vector<std::size_t> candidates;         // set entering the round
  std::vector<std::size_t> lasso_selected;     // A
  std::vector<std::size_t> residual_selected;  // M
  std::vector<std::size_t> updated;            // A union M
  double theta = 0.0;
  bool lasso_converged = false;
  bool refit_converged = false;
  // "refit" (unpenalized fit on A) or "penalized" when the refit degenerates.
  std::string residual_model = "refit";
};

struct IterativeResult {
  std::vector<std::size_t> selected;  // sorted, 0-based
  std::vector<std::size_t> initial;   // marginal top floor(n / ln n)
  std::vector<IterationRecord> iterations;
  std::size_t q = 0;
  bool fallback = false;   // lasso kept nothing; initial set returned
  bool truncated = false;  // final set cut back to q by marginal d
  std::string stop_reason;
  ScreeningResult marginal;
};

IterativeResult iterative_screen(const Dataset& data, const IterativeConfig& config = {});

std::string iterative_trace_json(const IterativeResult& result, const Dataset& data);

}  // namespace rmstscreen
