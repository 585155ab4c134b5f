#include "rmstscreen/iterative.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <iterator>

#include "rmstscreen/error.hpp"
#include "rmstscreen/random.hpp"

namespace rmstscreen {
namespace {

// Beyond this |eta| the unpenalized refit is drifting towards separation.
constexpr double kMaxLinearPredictor = 20.0;

std::vector<std::size_t> sorted_union(const std::vector<std::size_t>& a,
                                      const std::vector<std::size_t>& b) {
  std::vector<std::size_t> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<std::size_t> sorted_copy(std::vector<std::size_t> v) {
  std::sort(v.begin(), v.end());
  return v;
}

// Keeps the `size` members with the largest marginal d (ties by index).
std::vector<std::size_t> truncate_by_marginal(const std::vector<std::size_t>& set,
                                              const ScreeningResult& marginal, std::size_t size) {
  const std::vector<std::size_t> pos = marginal.rank_positions();
  std::vector<std::size_t> v = set;
  std::sort(v.begin(), v.end(), [&](std::size_t a, std::size_t b) { return pos[a] < pos[b]; });
  if (v.size() > size) v.resize(size);
  std::sort(v.begin(), v.end());
  return v;
}

bool usable_residual_model(const CoxGamFit& fit, const std::vector<double>& residuals) {
  if (!fit.converged) return false;
  for (double r : residuals) {
    if (!std::isfinite(r)) return false;
  }
  return fit.linear_predictor.size() == 0 || fit.linear_predictor.cwiseAbs().maxCoeff() <= kMaxLinearPredictor;
}

}  // namespace

IterativeResult iterative_screen(const Dataset& data, const IterativeConfig& config) {
  require_valid(data);
  const std::size_t n = data.rows();
  const std::size_t p = data.cols();
  if (n < 20) throw Error(ErrorCode::kInvalidArgument, "iterative screening needs n >= 20");
  if (config.max_iterations < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_iterations must be >= 1");
  }
  IterativeResult out;
  out.q = config.q.value_or(n / 2);
  if (out.q < 1) throw Error(ErrorCode::kInvalidArgument, "q must be >= 1");
  if (out.q > p) {
    throw Error(ErrorCode::kInvalidArgument,
                "q (" + std::to_string(out.q) + ") exceeds the number of features (" +
                    std::to_string(p) + ")");
  }

  ScreeningConfig sc = config.screening;
  sc.workers = config.workers;
  const std::size_t step = resolve_selected_size(sc, n, p);
  sc.selected_size = step;

  out.marginal = screen(data, sc);
  out.initial = sorted_copy(out.marginal.selected);

  const std::span<const double> time(data.time);
  const std::span<const int> status(data.status);

  std::vector<std::size_t> current = out.initial;
  std::vector<std::size_t> previous;  // the empty set before the first round
  for (std::size_t k = 1;; ++k) {
    IterationRecord rec;
    rec.candidates = current;

    const AdditiveDesign design = build_additive_design(data.covariates, current, config.spline);
    CvlOptions cvl;
    cvl.grid_size = config.cvl_grid_size;
    cvl.folds = config.cvl_folds;
    cvl.seed = derive_seed(config.seed, k);
    cvl.workers = config.workers;
    cvl.lasso = config.lasso;
    std::vector<std::size_t> lasso_set;
    std::optional<CoxGamFit> fit;
    if (design.matrix.cols() > 0) {
      const CvlResult tuned = cvl_select_theta(design.matrix, time, status, cvl);
      fit = fit_cox_lasso(design.matrix, time, status, tuned.theta, config.lasso);
      rec.theta = tuned.theta;
      rec.lasso_converged = fit->converged;
      lasso_set = selected_features(*fit, design);
    }
    rec.lasso_selected = lasso_set;

    if (lasso_set.empty() && k == 1) {
      out.fallback = true;
      out.iterations.push_back(std::move(rec));
      out.selected = truncate_by_marginal(out.initial, out.marginal, out.q);
      out.truncated = out.initial.size() > out.q;
      out.stop_reason = "fallback";
      return out;
    }

    // Residuals from an unpenalized refit on the selected set. When that
    // refit has no finite maximizer (too many columns for the events) the
    // penalized fit supplies the residuals instead.
    const AdditiveDesign refit_design =
        build_additive_design(data.covariates, lasso_set, config.spline);
    const CoxGamFit refit = fit_cox_lasso(refit_design.matrix, time, status, 0.0, config.lasso);
    rec.refit_converged = refit.converged;
    std::vector<double> residuals;
    bool usable = true;
    try {
      residuals = deviance_residuals(refit, time, status);
      usable = usable_residual_model(refit, residuals);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNumerical || !fit) throw;
      usable = false;
    }
    if (!usable && fit) {
      residuals = deviance_residuals(*fit, time, status);
      rec.residual_model = "penalized";
    }
    const ScreeningResult rs = screen_uncensored(residuals, data.covariates, lasso_set, sc);
    rec.residual_selected = sorted_copy(rs.selected);

    previous = current;
    current = sorted_union(lasso_set, rec.residual_selected);
    rec.updated = current;
    out.iterations.push_back(std::move(rec));

    if (current.size() >= out.q) {
      out.stop_reason = "reached q";
      break;
    }
    if (current == previous) {
      out.stop_reason = "unchanged";
      break;
    }
    if (k >= config.max_iterations) {
      out.stop_reason = "max_iterations";
      break;
    }
  }
  out.truncated = current.size() > out.q;
  out.selected = out.truncated ? truncate_by_marginal(current, out.marginal, out.q) : current;
  return out;
}

}  // namespace rmstscreen
