#include "rmstscreen/coxgam.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rmstscreen/error.hpp"
#include "rmstscreen/parallel.hpp"
#include "rmstscreen/quantile.hpp"
#include "rmstscreen/random.hpp"

namespace rmstscreen {
namespace {

// Nonzero basis functions at x on knot span `span` (degree p), by the
// triangular de Boor scheme.
void basis_funs(std::size_t span, double x, int p, const std::vector<double>& knots,
                std::vector<double>& out) {
  out.assign(static_cast<std::size_t>(p) + 1, 0.0);
  std::vector<double> left(static_cast<std::size_t>(p) + 1), right(static_cast<std::size_t>(p) + 1);
  out[0] = 1.0;
  for (int j = 1; j <= p; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    left[ju] = x - knots[span + 1 - ju];
    right[ju] = knots[span + ju] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const auto ru = static_cast<std::size_t>(r);
      const double denom = right[ru + 1] + left[ju - ru];
      const double temp = denom == 0.0 ? 0.0 : out[ru] / denom;
      out[ru] = saved + right[ru + 1] * temp;
      saved = left[ju - ru] * temp;
    }
    out[ju] = saved;
  }
}

// Ascending-time grouping shared by every partial-likelihood evaluation.
struct RiskSets {
  std::vector<std::size_t> order;
  std::vector<std::size_t> group_start;
  std::vector<double> group_time;
  std::vector<double> deaths;
  std::vector<std::size_t> group_of;

  RiskSets(std::span<const double> time, std::span<const int> status) {
    const std::size_t n = time.size();
    if (status.size() != n) throw Error(ErrorCode::kShapeMismatch, "time and status lengths differ");
    order.resize(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return time[a] < time[b]; });
    group_of.resize(n);
    double total_deaths = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t i = order[k];
      if (k == 0 || time[i] != time[order[k - 1]]) {
        group_start.push_back(k);
        group_time.push_back(time[i]);
        deaths.push_back(0.0);
      }
      group_of[i] = group_start.size() - 1;
      if (status[i] == 1) {
        deaths.back() += 1.0;
        total_deaths += 1.0;
      }
    }
    group_start.push_back(n);
    if (total_deaths == 0.0) throw Error(ErrorCode::kNoEvents, "partial likelihood needs at least one event");
  }

  std::size_t groups() const { return group_time.size(); }
};

struct CoxEval {
  double value = 0.0;
  Eigen::VectorXd grad;
  Eigen::VectorXd hess;  // diagonal of the Hessian with respect to eta
};

// Risk-set sums are accumulated once from the latest time backwards; a
// global max shift keeps the exponentials in range.
CoxEval evaluate(const RiskSets& rs, const Eigen::VectorXd& eta, std::span<const int> status,
                 bool derivatives) {
  const auto n = static_cast<std::size_t>(eta.size());
  const double shift = n == 0 ? 0.0 : eta.maxCoeff();
  Eigen::VectorXd e(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    e[static_cast<Eigen::Index>(i)] = std::exp(eta[static_cast<Eigen::Index>(i)] - shift);
  }
  const std::size_t g_count = rs.groups();
  std::vector<double> risk(g_count);
  double acc = 0.0;
  for (std::size_t g = g_count; g-- > 0;) {
    for (std::size_t k = rs.group_start[g]; k < rs.group_start[g + 1]; ++k) {
      acc += e[static_cast<Eigen::Index>(rs.order[k])];
    }
    risk[g] = acc;
  }
  CoxEval out;
  for (std::size_t g = 0; g < g_count; ++g) {
    if (rs.deaths[g] > 0.0) out.value += rs.deaths[g] * (std::log(risk[g]) + shift);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (status[i] == 1) out.value -= eta[static_cast<Eigen::Index>(i)];
  }
  if (!derivatives) return out;

  std::vector<double> cum1(g_count), cum2(g_count);
  double h1 = 0.0, h2 = 0.0;
  for (std::size_t g = 0; g < g_count; ++g) {
    if (rs.deaths[g] > 0.0) {
      h1 += rs.deaths[g] / risk[g];
      h2 += rs.deaths[g] / (risk[g] * risk[g]);
    }
    cum1[g] = h1;
    cum2[g] = h2;
  }
  out.grad.resize(static_cast<Eigen::Index>(n));
  out.hess.resize(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const std::size_t g = rs.group_of[i];
    out.grad[ii] = e[ii] * cum1[g] - (status[i] == 1 ? 1.0 : 0.0);
    out.hess[ii] = e[ii] * cum1[g] - e[ii] * e[ii] * cum2[g];
  }
  return out;
}

// Hessian of the negative log partial likelihood in the coefficients,
//   X^T diag(e_i H_i) X - sum_g d_g S1_g S1_g^T / S0_g^2,
// where H_i sums d_g / S0_g over event groups at or before subject i and
// S0_g, S1_g are the risk-set sums of e and e x.
void coefficient_hessian(const RiskSets& rs, const Eigen::MatrixXd& x, const Eigen::VectorXd& eta,
                         Eigen::MatrixXd& hess) {
  const Eigen::Index n = x.rows();
  const Eigen::Index m = x.cols();
  const double shift = eta.maxCoeff();
  const Eigen::VectorXd e = (eta.array() - shift).exp().matrix();
  std::size_t event_groups = 0;
  for (double d : rs.deaths) event_groups += d > 0.0 ? 1 : 0;

  std::vector<double> s0(rs.groups());
  Eigen::MatrixXd u(m, static_cast<Eigen::Index>(event_groups));
  Eigen::VectorXd s1 = Eigen::VectorXd::Zero(m);
  double acc = 0.0;
  Eigen::Index col = static_cast<Eigen::Index>(event_groups);
  for (std::size_t g = rs.groups(); g-- > 0;) {
    for (std::size_t k = rs.group_start[g]; k < rs.group_start[g + 1]; ++k) {
      const auto i = static_cast<Eigen::Index>(rs.order[k]);
      acc += e[i];
      s1.noalias() += e[i] * x.row(i).transpose();
    }
    s0[g] = acc;
    if (rs.deaths[g] > 0.0) u.col(--col) = (std::sqrt(rs.deaths[g]) / acc) * s1;
  }
  Eigen::VectorXd w(n);
  double cum = 0.0;
  for (std::size_t g = 0; g < rs.groups(); ++g) {
    if (rs.deaths[g] > 0.0) cum += rs.deaths[g] / s0[g];
    for (std::size_t k = rs.group_start[g]; k < rs.group_start[g + 1]; ++k) {
      const auto i = static_cast<Eigen::Index>(rs.order[k]);
      w[i] = e[i] * cum;
    }
  }
  hess.noalias() = x.transpose() * w.asDiagonal() * x;
  hess.noalias() -= u * u.transpose();
}

double soft_threshold(double z, double gamma) {
  if (z > gamma) return z - gamma;
  if (z < -gamma) return z + gamma;
  return 0.0;
}

Eigen::VectorXd column_scales(const Eigen::MatrixXd& basis) {
  const Eigen::Index n = basis.rows();
  Eigen::VectorXd sd(basis.cols());
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    const double mean = basis.col(j).mean();
    const double var = (basis.col(j).array() - mean).square().sum() / static_cast<double>(n);
    const double s = std::sqrt(var);
    if (!(s > 1e-10)) {
      throw Error(ErrorCode::kDegenerateColumn,
                  "basis column " + std::to_string(j) + " has zero variance");
    }
    sd[j] = s;
  }
  return sd;
}

}  // namespace

BSplineBasis bspline_full_basis(std::span<const double> x, const SplineSpec& spec) {
  if (spec.degree < 1) throw Error(ErrorCode::kInvalidArgument, "spline degree must be >= 1");
  if (spec.num_basis < spec.degree) {
    throw Error(ErrorCode::kInvalidArgument, "num_basis must be >= degree");
  }
  if (x.empty()) throw Error(ErrorCode::kInvalidArgument, "empty covariate");
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  const double lo = sorted.front();
  const double hi = sorted.back();
  if (!(hi > lo)) throw Error(ErrorCode::kConstantCovariate, "spline basis of a constant covariate");

  const int p = spec.degree;
  const int interior = spec.num_basis - spec.degree;
  BSplineBasis out;
  out.knots.assign(static_cast<std::size_t>(p) + 1, lo);
  for (int k = 1; k <= interior; ++k) {
    out.knots.push_back(quantile_sorted(sorted, static_cast<double>(k) / (interior + 1)));
  }
  out.knots.insert(out.knots.end(), static_cast<std::size_t>(p) + 1, hi);

  const std::size_t n_funcs = out.knots.size() - static_cast<std::size_t>(p) - 1;
  out.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(x.size()),
                                     static_cast<Eigen::Index>(n_funcs));
  std::vector<double> local;
  const std::size_t last_span = n_funcs - 1;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = std::clamp(x[i], lo, hi);
    // Knot span with knots[span] <= xi < knots[span + 1]; xi == hi uses the last one.
    std::size_t span = last_span;
    if (xi < hi) {
      auto it = std::upper_bound(out.knots.begin(), out.knots.end(), xi);
      span = static_cast<std::size_t>(it - out.knots.begin()) - 1;
    }
    basis_funs(span, xi, p, out.knots, local);
    for (int r = 0; r <= p; ++r) {
      out.values(static_cast<Eigen::Index>(i),
                 static_cast<Eigen::Index>(span - static_cast<std::size_t>(p) +
                                           static_cast<std::size_t>(r))) = local[static_cast<std::size_t>(r)];
    }
  }
  return out;
}

Eigen::MatrixXd bspline_basis(std::span<const double> x, const SplineSpec& spec) {
  const BSplineBasis full = bspline_full_basis(x, spec);
  Eigen::MatrixXd reduced = full.values.rightCols(full.values.cols() - 1);
  for (Eigen::Index j = 0; j < reduced.cols(); ++j) {
    reduced.col(j).array() -= reduced.col(j).mean();
  }
  return reduced;
}

AdditiveDesign build_additive_design(const Eigen::MatrixXd& covariates,
                                     const std::vector<std::size_t>& features,
                                     const SplineSpec& spec) {
  const Eigen::Index n = covariates.rows();
  AdditiveDesign design;
  std::vector<Eigen::MatrixXd> parts;
  std::size_t total = 0;
  for (std::size_t j : features) {
    if (j >= static_cast<std::size_t>(covariates.cols())) {
      throw Error(ErrorCode::kInvalidArgument, "feature index out of range");
    }
    const auto col = covariates.col(static_cast<Eigen::Index>(j));
    const std::span<const double> x(col.data(), static_cast<std::size_t>(n));
    if (col.maxCoeff() == col.minCoeff()) continue;
    Eigen::MatrixXd b = bspline_basis(x, spec);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index c = 0; c < b.cols(); ++c) {
      if (std::sqrt(b.col(c).squaredNorm() / static_cast<double>(n)) > 1e-8) keep.push_back(c);
    }
    if (keep.empty()) continue;
    Eigen::MatrixXd kept(n, static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c) kept.col(static_cast<Eigen::Index>(c)) = b.col(keep[c]);
    design.features.push_back(j);
    design.blocks.emplace_back(total, keep.size());
    total += keep.size();
    parts.push_back(std::move(kept));
  }
  design.matrix.resize(n, static_cast<Eigen::Index>(total));
  for (std::size_t b = 0; b < parts.size(); ++b) {
    design.matrix.middleCols(static_cast<Eigen::Index>(design.blocks[b].first),
                             static_cast<Eigen::Index>(design.blocks[b].second)) = parts[b];
  }
  return design;
}

PartialLikelihood cox_neg_log_pl(const Eigen::VectorXd& eta, std::span<const double> time,
                                 std::span<const int> status) {
  if (static_cast<std::size_t>(eta.size()) != time.size()) {
    throw Error(ErrorCode::kShapeMismatch, "eta and time lengths differ");
  }
  const RiskSets rs(time, status);
  CoxEval e = evaluate(rs, eta, status, true);
  return {e.value, std::move(e.grad)};
}

double BaselineHazard::operator()(double t) const {
  auto it = std::upper_bound(times.begin(), times.end(), t);
  if (it == times.begin()) return 0.0;
  return cumhaz[static_cast<std::size_t>(it - times.begin()) - 1];
}

BaselineHazard breslow_baseline(const Eigen::VectorXd& eta, std::span<const double> time,
                                std::span<const int> status) {
  const RiskSets rs(time, status);
  const double shift = eta.maxCoeff();
  BaselineHazard out;
  double risk = 0.0;
  std::vector<double> risk_at(rs.groups());
  for (std::size_t g = rs.groups(); g-- > 0;) {
    for (std::size_t k = rs.group_start[g]; k < rs.group_start[g + 1]; ++k) {
      risk += std::exp(eta[static_cast<Eigen::Index>(rs.order[k])] - shift);
    }
    risk_at[g] = risk;
  }
  const double scale = std::exp(-shift);
  double cum = 0.0;
  for (std::size_t g = 0; g < rs.groups(); ++g) {
    if (rs.deaths[g] == 0.0) continue;
    cum += rs.deaths[g] / risk_at[g] * scale;
    out.times.push_back(rs.group_time[g]);
    out.cumhaz.push_back(cum);
  }
  return out;
}

BaselineHazard breslow_baseline(const CoxGamFit& fit, std::span<const double> time,
                                std::span<const int> status) {
  return breslow_baseline(fit.linear_predictor, time, status);
}

double cox_theta_max(const Eigen::MatrixXd& basis, std::span<const double> time,
                     std::span<const int> status) {
  if (basis.cols() == 0) return 0.0;
  const RiskSets rs(time, status);
  const Eigen::VectorXd sd = column_scales(basis);
  // Same scaled product as the first step of fit_cox_lasso, so the
  // threshold comparison there is exact at theta_max.
  const Eigen::MatrixXd xs = basis * sd.cwiseInverse().asDiagonal();
  const CoxEval e = evaluate(rs, Eigen::VectorXd::Zero(basis.rows()), status, true);
  return (xs.transpose() * e.grad).cwiseAbs().maxCoeff();
}

CoxGamFit fit_cox_lasso(const Eigen::MatrixXd& basis, std::span<const double> time,
                        std::span<const int> status, double theta,
                        const CoxLassoOptions& options, const Eigen::VectorXd* warm_start) {
  if (!(theta >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "theta must be >= 0");
  if (static_cast<std::size_t>(basis.rows()) != time.size()) {
    throw Error(ErrorCode::kShapeMismatch, "basis rows differ from time length");
  }
  const RiskSets rs(time, status);
  const Eigen::Index n = basis.rows();
  const Eigen::Index m = basis.cols();

  CoxGamFit fit;
  fit.theta = theta;
  if (m == 0) {
    fit.alpha = Eigen::VectorXd(0);
    fit.linear_predictor = Eigen::VectorXd::Zero(n);
    fit.baseline_cumhaz = breslow_baseline(fit.linear_predictor, time, status);
    fit.converged = true;
    return fit;
  }

  const Eigen::VectorXd sd = column_scales(basis);
  const Eigen::MatrixXd xs = basis * sd.cwiseInverse().asDiagonal();
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(m);
  if (warm_start && warm_start->size() == m) beta = warm_start->cwiseProduct(sd);
  Eigen::VectorXd eta = xs * beta;

  auto objective = [&](const Eigen::VectorXd& eta_v, const Eigen::VectorXd& beta_v) {
    return evaluate(rs, eta_v, status, false).value + theta * beta_v.lpNorm<1>();
  };
  double current = objective(eta, beta);

  Eigen::MatrixXd hess(m, m);
  Eigen::VectorXd v(m);
  std::vector<char> active(static_cast<std::size_t>(m));
  double last_change = std::numeric_limits<double>::infinity();
  for (int iter = 1; iter <= options.max_iter; ++iter) {
    fit.iterations = iter;
    const CoxEval ev = evaluate(rs, eta, status, true);
    const Eigen::VectorXd grad = xs.transpose() * ev.grad;
    coefficient_hessian(rs, xs, eta, hess);

    // Coordinate descent on the quadratic model plus the L1 term. Sweeps
    // alternate between all coordinates and the current nonzero ones.
    Eigen::VectorXd trial = beta;
    v.setZero();  // hess * (trial - beta)
    auto update = [&](Eigen::Index j) {
      const double a = hess(j, j);
      if (!(a > 1e-12)) return 0.0;
      const double r = grad[j] + v[j] - a * (trial[j] - beta[j]);
      const double updated = soft_threshold(a * beta[j] - r, theta) / a;
      const double delta = updated - trial[j];
      if (delta == 0.0) return 0.0;
      trial[j] = updated;
      v.noalias() += delta * hess.col(j);
      return std::abs(delta) * std::sqrt(a);
    };
    // The quadratic model only needs to be solved about as finely as the
    // iterates are still moving.
    const double inner_tol = std::max(0.1 * options.tol, 0.01 * last_change);
    int sweeps = 0;
    while (sweeps < options.max_inner_sweeps) {
      double change = 0.0;
      for (Eigen::Index j = 0; j < m; ++j) change = std::max(change, update(j));
      ++sweeps;
      if (change < inner_tol) break;
      for (Eigen::Index j = 0; j < m; ++j) active[static_cast<std::size_t>(j)] = trial[j] != 0.0;
      while (sweeps < options.max_inner_sweeps) {
        double inner = 0.0;
        for (Eigen::Index j = 0; j < m; ++j) {
          if (active[static_cast<std::size_t>(j)]) inner = std::max(inner, update(j));
        }
        ++sweeps;
        if (inner < inner_tol) break;
      }
    }

    const Eigen::VectorXd direction = trial - beta;
    if (direction.lpNorm<Eigen::Infinity>() == 0.0) {
      fit.converged = true;
      break;
    }
    // Backtracking keeps the penalized objective non-increasing.
    double step = 1.0;
    bool accepted = false;
    Eigen::VectorXd next_beta, next_eta;
    double next_value = current;
    for (int ls = 0; ls < 40; ++ls) {
      next_beta = beta + step * direction;
      next_eta = xs * next_beta;
      next_value = objective(next_eta, next_beta);
      if (next_value <= current) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // No decrease is representable: the iterate is optimal to working precision.
      fit.converged = true;
      break;
    }
    const double change = step * direction.lpNorm<Eigen::Infinity>();
    last_change = change;
    beta = next_beta;
    eta = next_eta;
    current = next_value;
    fit.objective_trace.push_back(current);
    if (change < options.tol) {
      fit.converged = true;
      break;
    }
  }

  fit.alpha = beta.cwiseQuotient(sd);
  fit.linear_predictor = eta;
  fit.baseline_cumhaz = breslow_baseline(eta, time, status);
  return fit;
}

namespace {

std::vector<std::size_t> assign_folds(std::span<const int> status, std::size_t folds, Rng& rng) {
  std::vector<std::size_t> events, censored;
  for (std::size_t i = 0; i < status.size(); ++i) (status[i] == 1 ? events : censored).push_back(i);
  rng.shuffle(events);
  rng.shuffle(censored);
  std::vector<std::size_t> fold(status.size());
  std::size_t k = 0;
  for (std::size_t i : events) fold[i] = k++ % folds;
  for (std::size_t i : censored) fold[i] = k++ % folds;
  return fold;
}

bool folds_usable(const std::vector<std::size_t>& fold, std::span<const int> status,
                  std::size_t folds) {
  std::vector<std::size_t> held(folds, 0);
  std::size_t total = 0;
  for (std::size_t i = 0; i < fold.size(); ++i) {
    if (status[i] == 1) {
      ++held[fold[i]];
      ++total;
    }
  }
  for (std::size_t f = 0; f < folds; ++f) {
    if (held[f] == 0 || held[f] == total) return false;
  }
  return true;
}

}  // namespace

CvlResult cvl_select_theta(const Eigen::MatrixXd& basis, std::span<const double> time,
                           std::span<const int> status, const CvlOptions& options) {
  if (options.folds < 2) throw Error(ErrorCode::kInvalidArgument, "cvl needs at least 2 folds");
  if (options.grid_size < 1) throw Error(ErrorCode::kInvalidArgument, "cvl grid must be non-empty");
  const std::size_t n = time.size();
  if (static_cast<std::size_t>(basis.rows()) != n || status.size() != n) {
    throw Error(ErrorCode::kShapeMismatch, "cvl inputs differ in length");
  }

  CvlResult out;
  const double theta_max = cox_theta_max(basis, time, status);
  out.grid.resize(options.grid_size);
  for (std::size_t k = 0; k < options.grid_size; ++k) {
    const double frac = options.grid_size == 1
                            ? 0.0
                            : static_cast<double>(k) / static_cast<double>(options.grid_size - 1);
    out.grid[k] = theta_max * std::pow(0.01, frac);
  }
  if (options.grid_size == 1) {
    out.theta = out.grid[0];
    out.cvl.assign(1, 0.0);
    return out;
  }

  Rng rng(options.seed, 0x6376);
  std::vector<std::size_t> fold;
  bool ok = false;
  for (int attempt = 0; attempt <= 10 && !ok; ++attempt) {
    fold = assign_folds(status, options.folds, rng);
    ok = folds_usable(fold, status, options.folds);
  }
  if (!ok) {
    throw Error(ErrorCode::kInvalidArgument, "cvl: could not form folds that all contain events");
  }

  const RiskSets all(time, status);
  std::vector<std::vector<double>> contrib(options.folds,
                                           std::vector<double>(options.grid_size, 0.0));
  parallel_for(options.folds, options.workers, [&](std::size_t f) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < n; ++i) {
      if (fold[i] != f) rows.push_back(i);
    }
    Eigen::MatrixXd train_x(static_cast<Eigen::Index>(rows.size()), basis.cols());
    std::vector<double> train_t(rows.size());
    std::vector<int> train_s(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
      train_x.row(static_cast<Eigen::Index>(k)) = basis.row(static_cast<Eigen::Index>(rows[k]));
      train_t[k] = time[rows[k]];
      train_s[k] = status[rows[k]];
    }
    const RiskSets train(train_t, train_s);
    Eigen::VectorXd warm = Eigen::VectorXd::Zero(basis.cols());
    for (std::size_t k = 0; k < options.grid_size; ++k) {
      const CoxGamFit fit =
          fit_cox_lasso(train_x, train_t, train_s, out.grid[k], options.lasso, &warm);
      warm = fit.alpha;
      const double full_nll = evaluate(all, basis * fit.alpha, status, false).value;
      const double train_nll = evaluate(train, fit.linear_predictor, train_s, false).value;
      // l(all) - l(train) with l the log partial likelihood.
      contrib[f][k] = -full_nll + train_nll;
    }
  });

  out.cvl.assign(options.grid_size, 0.0);
  for (std::size_t f = 0; f < options.folds; ++f) {
    for (std::size_t k = 0; k < options.grid_size; ++k) out.cvl[k] += contrib[f][k];
  }
  out.best_index = 0;
  for (std::size_t k = 1; k < options.grid_size; ++k) {
    if (out.cvl[k] > out.cvl[out.best_index]) out.best_index = k;
  }
  out.theta = out.grid[out.best_index];
  return out;
}

std::vector<double> martingale_residuals(const Eigen::VectorXd& eta, const BaselineHazard& baseline,
                                         std::span<const double> time,
                                         std::span<const int> status) {
  std::vector<double> m(time.size());
  for (std::size_t i = 0; i < time.size(); ++i) {
    const double cumhaz = baseline(time[i]);
    const double expected =
        cumhaz > 0.0 ? std::exp(std::log(cumhaz) + eta[static_cast<Eigen::Index>(i)]) : 0.0;
    m[i] = (status[i] == 1 ? 1.0 : 0.0) - expected;
  }
  return m;
}

std::vector<double> deviance_residuals(const Eigen::VectorXd& eta, const BaselineHazard& baseline,
                                       std::span<const double> time,
                                       std::span<const int> status) {
  const std::vector<double> m = martingale_residuals(eta, baseline, time, status);
  std::vector<double> dev(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    double inner = m[i];
    if (status[i] == 1) {
      const double expected = 1.0 - m[i];
      if (!(expected > 0.0)) {
        throw Error(ErrorCode::kNumerical, "deviance residual undefined: zero expected events at an event time");
      }
      inner += std::log(expected);
    }
    const double sq = std::max(-2.0 * inner, 0.0);
    const double mag = std::sqrt(sq);
    dev[i] = m[i] > 0.0 ? mag : (m[i] < 0.0 ? -mag : 0.0);
  }
  return dev;
}

std::vector<double> deviance_residuals(const CoxGamFit& fit, std::span<const double> time,
                                       std::span<const int> status) {
  return deviance_residuals(fit.linear_predictor, fit.baseline_cumhaz, time, status);
}

std::vector<std::size_t> selected_features(const CoxGamFit& fit, const AdditiveDesign& design) {
  std::vector<std::size_t> out;
  for (std::size_t b = 0; b < design.features.size(); ++b) {
    const auto [start, count] = design.blocks[b];
    for (std::size_t c = start; c < start + count; ++c) {
      if (fit.alpha[static_cast<Eigen::Index>(c)] != 0.0) {
        out.push_back(design.features[b]);
        break;
      }
    }
  }
  return out;
}

}  // namespace rmstscreen
