#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "rmstscreen/km.hpp"
#include "rmstscreen/screening.hpp"
#include "rmstscreen/simgen.hpp"
#include "rmstscreen/survdata.hpp"

// Experimental: screening for interval-censored data.

namespace rmstscreen {

struct TurnbullOptions {
  double tol = 1e-8;
  int max_iter = 5000;
};

struct TurnbullFit {
  std::vector<std::pair<double, double>> intervals;  // disjoint (q, p], ascending
  std::vector<double> masses;
  SurvivalCurve curve;  // linear across each finite interval, flat elsewhere
  std::vector<double> loglik_trace;
  int iterations = 0;
  bool converged = false;

  // Right end of the last interval with a finite right endpoint.
  double last_finite_right() const;
};

// Maximal intersections of the observation intervals (L, R].
std::vector<std::pair<double, double>> turnbull_intervals(std::span<const double> left,
                                                          std::span<const double> right);

TurnbullFit turnbull_fit(std::span<const double> left, std::span<const double> right,
                         const TurnbullOptions& options = {});
// Same with a multiplicity per observation (zero weights are ignored).
TurnbullFit turnbull_fit(std::span<const double> left, std::span<const double> right,
                         std::span<const double> weights, const TurnbullOptions& options = {});

FeatureDiscrepancy interval_rmst_discrepancy(const IntervalDataset& data, std::size_t j,
                                             const ScreeningConfig& config = {},
                                             const TurnbullOptions& options = {});

ScreeningResult interval_screen(const IntervalDataset& data, const ScreeningConfig& config = {},
                                const TurnbullOptions& options = {});

// Bracket of t on the inspection grid 1, 2, ..., floor(horizon), horizon.
// Times past the horizon give (horizon, +inf].
std::pair<double, double> bracket_on_grid(double t, double horizon);

struct GeneratedIntervalData {
  IntervalDataset data;
  std::vector<std::size_t> active_set;
  std::vector<double> event_times;
  double horizon = 0.0;
  double right_censored_share = 0.0;
};

// Latent times as in generate(); the horizon is the (1 - target) quantile
// of the pilot event times, so about `target` of subjects end up (h, inf].
GeneratedIntervalData gen_interval_data(const ScenarioSpec& spec);

}  // namespace rmstscreen
