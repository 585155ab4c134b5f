#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "rmstscreen/km.hpp"
#include "rmstscreen/survdata.hpp"

namespace rmstscreen {

struct ScreeningConfig {
  // Strata smaller than this contribute nothing; 6 encodes "more than 5".
  std::size_t min_stratum_size = 6;
  // Number of features kept; nullopt selects floor(n / ln n).
  std::optional<std::size_t> selected_size;
  // Worker threads for feature-level parallelism; 0 = all hardware threads.
  std::size_t workers = 0;
};

struct FeatureDiscrepancy {
  double d = 0.0;   // d1 + d2
  double d1 = 0.0;  // upper strata {X_j >= x}
  double d2 = 0.0;  // lower strata {X_j <  x}
  std::size_t skipped_terms = 0;
};

// Per-feature statistics plus the induced ranking. Indices are 0-based.
struct ScreeningResult {
  std::vector<double> d;
  std::vector<double> d1;
  std::vector<double> d2;
  std::vector<std::size_t> ranking;   // features by descending d, ties by index
  std::vector<std::size_t> selected;  // leading entries of ranking
  std::vector<std::size_t> skipped_term_counts;

  std::size_t size() const { return d.size(); }
  // 1-based position of feature j in the ranking.
  std::vector<std::size_t> rank_positions() const;
};

// floor(n / ln n), the default selected-set size.
std::size_t n_over_log_n(std::size_t n);

// Resolves the configured selected size against n and p.
std::size_t resolve_selected_size(const ScreeningConfig& config, std::size_t n, std::size_t p);

// Shared per-dataset state: the overall KM curve and the time ordering used
// by every stratum scan. Immutable once built, so workers share it freely.
class RmstScreener {
 public:
  explicit RmstScreener(const Dataset& data);

  const SurvivalCurve& overall_curve() const { return overall_; }

  // Stratified RMST discrepancy of one covariate column.
  FeatureDiscrepancy discrepancy(std::span<const double> x, std::size_t min_stratum_size) const;

 private:
  std::vector<double> time_sorted_;
  std::vector<int> status_sorted_;
  std::vector<std::size_t> order_;        // row index at each time-sorted position
  std::vector<std::size_t> group_start_;  // boundaries of equal-time groups
  SurvivalCurve overall_;
};

FeatureDiscrepancy rmst_discrepancy(const Dataset& data, std::size_t j,
                                    const ScreeningConfig& config = {});

ScreeningResult screen(const Dataset& data, const ScreeningConfig& config = {});

// Uncensored analogue using stratum means of a continuous response.
FeatureDiscrepancy uncensored_discrepancy(std::span<const double> y, std::span<const double> x,
                                          const ScreeningConfig& config = {});

// Ranks every feature not in `exclude` by uncensored_discrepancy. Excluded
// features get d = -inf and are never selected.
ScreeningResult screen_uncensored(std::span<const double> y, const Eigen::MatrixXd& covariates,
                                  const std::vector<std::size_t>& exclude,
                                  const ScreeningConfig& config = {});

// Builds ranking and selected set from filled-in statistics. Features whose
// d is -inf are ranked last and never selected.
void finalize_ranking(ScreeningResult& result, std::size_t selected_size);

// Dense ranks of x (0 = smallest). Used by every stratification routine.
std::vector<std::size_t> dense_ranks(std::span<const double> x, std::size_t* distinct = nullptr);

}  // namespace rmstscreen
