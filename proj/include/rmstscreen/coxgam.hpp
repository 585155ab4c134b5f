#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace rmstscreen {

// Cubic B-spline expansion per feature. With the defaults (degree 3, three
// columns) there are no interior knots: the clamped basis on [min, max] has
// four functions and the first is dropped, leaving three columns that are
// then centered. Larger num_basis adds interior knots at equally spaced
// quantiles of the feature.
struct SplineSpec {
  int degree = 3;
  int num_basis = 3;
};

// Full clamped basis (num_basis + 1 columns, uncentered) and its knots.
struct BSplineBasis {
  Eigen::MatrixXd values;
  std::vector<double> knots;
};

BSplineBasis bspline_full_basis(std::span<const double> x, const SplineSpec& spec);

// Retained num_basis columns, each centered to mean zero.
Eigen::MatrixXd bspline_basis(std::span<const double> x, const SplineSpec& spec);

// Column blocks of an additive design: features[b] owns columns
// [blocks[b].first, blocks[b].first + blocks[b].second).
struct AdditiveDesign {
  Eigen::MatrixXd matrix;
  std::vector<std::size_t> features;
  std::vector<std::pair<std::size_t, std::size_t>> blocks;
};

// Expands each listed covariate column. Basis columns with (numerically)
// zero variance are left out of the design.
AdditiveDesign build_additive_design(const Eigen::MatrixXd& covariates,
                                     const std::vector<std::size_t>& features,
                                     const SplineSpec& spec);

struct PartialLikelihood {
  double value = 0.0;        // negative log partial likelihood (Breslow ties)
  Eigen::VectorXd gradient;  // with respect to the linear predictor
};

PartialLikelihood cox_neg_log_pl(const Eigen::VectorXd& eta, std::span<const double> time,
                                 std::span<const int> status);

// Breslow cumulative baseline hazard, a right-continuous step function.
struct BaselineHazard {
  std::vector<double> times;   // distinct event times
  std::vector<double> cumhaz;  // value from times[k] on

  double operator()(double t) const;
};

struct CoxLassoOptions {
  double tol = 1e-7;
  int max_iter = 1000;
  int max_inner_sweeps = 200;
};

struct CoxGamFit {
  std::vector<std::size_t> features;
  SplineSpec spec;
  Eigen::VectorXd alpha;  // original basis scale
  double theta = 0.0;
  Eigen::VectorXd linear_predictor;
  BaselineHazard baseline_cumhaz;
  bool converged = false;
  int iterations = 0;
  // Penalized objective after each outer iteration (standardized scale).
  std::vector<double> objective_trace;
};

// Largest useful penalty: every coefficient is zero for theta >= theta_max.
double cox_theta_max(const Eigen::MatrixXd& basis, std::span<const double> time,
                     std::span<const int> status);

// L1-penalized Cox fit by proximal Newton steps: each outer iteration builds
// the quadratic approximation of the partial likelihood (exact Hessian in
// the coefficients), solves it by cyclic coordinate descent, then
// backtracks until the penalized objective does not increase. Columns are
// scaled to unit variance and the penalty acts on the scaled coefficients.
CoxGamFit fit_cox_lasso(const Eigen::MatrixXd& basis, std::span<const double> time,
                        std::span<const int> status, double theta,
                        const CoxLassoOptions& options = {},
                        const Eigen::VectorXd* warm_start = nullptr);

struct CvlOptions {
  std::size_t grid_size = 50;
  std::size_t folds = 5;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  CoxLassoOptions lasso;
};

struct CvlResult {
  double theta = 0.0;
  std::size_t best_index = 0;
  std::vector<double> grid;  // descending, grid[0] = theta_max
  std::vector<double> cvl;
};

// Cross-validated log partial likelihood over a log-spaced grid from
// theta_max down to 0.01 * theta_max; returns the maximizer, ties going to
// the larger theta. Folds are stratified by event status.
CvlResult cvl_select_theta(const Eigen::MatrixXd& basis, std::span<const double> time,
                           std::span<const int> status, const CvlOptions& options = {});

BaselineHazard breslow_baseline(const Eigen::VectorXd& eta, std::span<const double> time,
                                std::span<const int> status);
BaselineHazard breslow_baseline(const CoxGamFit& fit, std::span<const double> time,
                                std::span<const int> status);

std::vector<double> martingale_residuals(const Eigen::VectorXd& eta, const BaselineHazard& baseline,
                                         std::span<const double> time,
                                         std::span<const int> status);

std::vector<double> deviance_residuals(const Eigen::VectorXd& eta, const BaselineHazard& baseline,
                                       std::span<const double> time, std::span<const int> status);
std::vector<double> deviance_residuals(const CoxGamFit& fit, std::span<const double> time,
                                       std::span<const int> status);

// Features with at least one nonzero coefficient.
std::vector<std::size_t> selected_features(const CoxGamFit& fit, const AdditiveDesign& design);

}  // namespace rmstscreen
