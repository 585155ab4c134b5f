#include "rmstscreen/interval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "rmstscreen/error.hpp"
#include "rmstscreen/parallel.hpp"
#include "rmstscreen/quantile.hpp"
#include "rmstscreen/random.hpp"

namespace rmstscreen {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

SurvivalCurve smoothed_curve(const std::vector<std::pair<double, double>>& intervals,
                             const std::vector<double>& masses) {
  std::vector<double> times, values;
  double s = 1.0;
  for (std::size_t k = 0; k < intervals.size(); ++k) {
    const auto [q, p] = intervals[k];
    if (std::isinf(p)) break;
    if (times.empty() || times.back() < q) {
      times.push_back(q);
      values.push_back(s);
    }
    s = std::max(s - masses[k], 0.0);
    times.push_back(p);
    values.push_back(std::min(s, values.back()));
  }
  return SurvivalCurve::linear(std::move(times), std::move(values));
}

// Per-feature scan sharing the distinct (L, R] codes of the whole sample.
struct IntervalCodes {
  std::vector<double> left, right;
  std::vector<std::size_t> code_of;
  std::vector<double> total;

  explicit IntervalCodes(const IntervalDataset& data) {
    std::map<std::pair<double, double>, std::size_t> index;
    for (std::size_t i = 0; i < data.left.size(); ++i) index.emplace(std::pair{data.left[i], data.right[i]}, 0);
    for (auto& [key, id] : index) {
      id = left.size();
      left.push_back(key.first);
      right.push_back(key.second);
    }
    total.assign(left.size(), 0.0);
    code_of.resize(data.left.size());
    for (std::size_t i = 0; i < data.left.size(); ++i) {
      code_of[i] = index.at({data.left[i], data.right[i]});
      total[code_of[i]] += 1.0;
    }
  }
};

FeatureDiscrepancy scan_feature(const IntervalCodes& codes, const TurnbullFit& overall,
                                std::span<const double> x, std::size_t min_size,
                                const TurnbullOptions& options) {
  const std::size_t n = x.size();
  std::size_t levels = 0;
  const std::vector<std::size_t> rank = dense_ranks(x, &levels);
  std::vector<std::vector<std::size_t>> rows_at(levels);
  for (std::size_t i = 0; i < n; ++i) rows_at[rank[i]].push_back(i);

  const double tau_all = overall.last_finite_right();
  const std::size_t k_codes = codes.left.size();
  std::vector<double> lower(k_codes, 0.0), upper(k_codes);
  FeatureDiscrepancy out;

  auto term = [&](const std::vector<double>& counts, bool& skipped) {
    double size = 0.0;
    bool finite = false;
    for (std::size_t c = 0; c < k_codes; ++c) {
      size += counts[c];
      if (counts[c] > 0.0 && std::isfinite(codes.right[c])) finite = true;
    }
    skipped = size < static_cast<double>(min_size) || !finite;
    if (skipped) return 0.0;
    const TurnbullFit fit = turnbull_fit(codes.left, codes.right, counts, options);
    const double tau = std::min(fit.last_finite_right(), tau_all);
    return std::abs(fit.curve.integral(tau) - overall.curve.integral(tau));
  };

  double sum1 = 0.0, sum2 = 0.0;
  for (std::size_t l = 0; l < levels; ++l) {
    const auto mult = static_cast<double>(rows_at[l].size());
    for (std::size_t c = 0; c < k_codes; ++c) upper[c] = codes.total[c] - lower[c];
    bool skipped = false;
    const double t1 = term(upper, skipped);
    if (skipped) out.skipped_terms += rows_at[l].size();
    sum1 += mult * t1;
    const double t2 = term(lower, skipped);
    if (skipped) out.skipped_terms += rows_at[l].size();
    sum2 += mult * t2;
    for (std::size_t i : rows_at[l]) lower[codes.code_of[i]] += 1.0;
  }
  out.d1 = sum1 / static_cast<double>(n);
  out.d2 = sum2 / static_cast<double>(n);
  out.d = out.d1 + out.d2;
  return out;
}

}  // namespace

double TurnbullFit::last_finite_right() const {
  for (std::size_t k = intervals.size(); k-- > 0;) {
    if (std::isfinite(intervals[k].second)) return intervals[k].second;
  }
  throw Error(ErrorCode::kNoFiniteIntervals, "no finite Turnbull interval");
}

std::vector<std::pair<double, double>> turnbull_intervals(std::span<const double> left,
                                                          std::span<const double> right) {
  // A right endpoint sorts before a left endpoint at the same value since
  // (a, t] and (t, b] do not overlap.
  std::vector<std::pair<double, int>> ends;
  ends.reserve(2 * left.size());
  for (std::size_t i = 0; i < left.size(); ++i) {
    ends.emplace_back(left[i], 1);
    ends.emplace_back(right[i], 0);
  }
  std::sort(ends.begin(), ends.end());
  std::vector<std::pair<double, double>> out;
  for (std::size_t k = 1; k < ends.size(); ++k) {
    if (ends[k - 1].second == 1 && ends[k].second == 0) out.emplace_back(ends[k - 1].first, ends[k].first);
  }
  return out;
}

TurnbullFit turnbull_fit(std::span<const double> left, std::span<const double> right,
                         const TurnbullOptions& options) {
  const std::vector<double> ones(left.size(), 1.0);
  return turnbull_fit(left, right, ones, options);
}

TurnbullFit turnbull_fit(std::span<const double> left, std::span<const double> right,
                         std::span<const double> weights, const TurnbullOptions& options) {
  if (left.size() != right.size() || left.size() != weights.size()) {
    throw Error(ErrorCode::kShapeMismatch, "interval inputs differ in length");
  }
  std::vector<double> l, r, w;
  bool finite = false;
  for (std::size_t i = 0; i < left.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    if (!(left[i] < right[i])) throw Error(ErrorCode::kInvertedInterval, "inverted interval");
    l.push_back(left[i]);
    r.push_back(right[i]);
    w.push_back(weights[i]);
    finite = finite || std::isfinite(right[i]);
  }
  if (!finite) throw Error(ErrorCode::kNoFiniteIntervals, "no finite intervals");

  TurnbullFit fit;
  fit.intervals = turnbull_intervals(l, r);
  const std::size_t m = fit.intervals.size();
  const std::size_t n = l.size();
  // Observation i covers the contiguous block [lo[i], hi[i]) of intervals.
  std::vector<std::size_t> lo(n), hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    lo[i] = static_cast<std::size_t>(
        std::partition_point(fit.intervals.begin(), fit.intervals.end(),
                             [&](const auto& iv) { return iv.first < l[i]; }) -
        fit.intervals.begin());
    hi[i] = static_cast<std::size_t>(
        std::partition_point(fit.intervals.begin(), fit.intervals.end(),
                             [&](const auto& iv) { return iv.second <= r[i]; }) -
        fit.intervals.begin());
  }
  const double total = std::accumulate(w.begin(), w.end(), 0.0);

  std::vector<double> s(m, 1.0 / static_cast<double>(m)), prefix(m + 1), acc(m + 1);
  for (int it = 1; it <= options.max_iter; ++it) {
    fit.iterations = it;
    prefix[0] = 0.0;
    for (std::size_t k = 0; k < m; ++k) prefix[k + 1] = prefix[k] + s[k];
    std::fill(acc.begin(), acc.end(), 0.0);
    double loglik = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double covered = prefix[hi[i]] - prefix[lo[i]];
      loglik += w[i] * std::log(covered);
      acc[lo[i]] += w[i] / covered;
      acc[hi[i]] -= w[i] / covered;
    }
    fit.loglik_trace.push_back(loglik);
    double running = 0.0, change = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      running += acc[k];
      const double next = s[k] * running / total;
      change = std::max(change, std::abs(next - s[k]));
      s[k] = next;
    }
    if (change < options.tol) {
      fit.converged = true;
      break;
    }
  }
  const double sum = std::accumulate(s.begin(), s.end(), 0.0);
  for (double& v : s) v /= sum;
  fit.masses = std::move(s);
  fit.curve = smoothed_curve(fit.intervals, fit.masses);
  return fit;
}

FeatureDiscrepancy interval_rmst_discrepancy(const IntervalDataset& data, std::size_t j,
                                             const ScreeningConfig& config,
                                             const TurnbullOptions& options) {
  require_valid(data);
  if (j >= static_cast<std::size_t>(data.covariates.cols())) {
    throw Error(ErrorCode::kInvalidArgument, "feature index out of range");
  }
  const IntervalCodes codes(data);
  const TurnbullFit overall = turnbull_fit(codes.left, codes.right, codes.total, options);
  const auto col = data.covariates.col(static_cast<Eigen::Index>(j));
  return scan_feature(codes, overall, std::span<const double>(col.data(), data.left.size()),
                      config.min_stratum_size, options);
}

ScreeningResult interval_screen(const IntervalDataset& data, const ScreeningConfig& config,
                                const TurnbullOptions& options) {
  require_valid(data);
  const std::size_t n = data.left.size();
  const auto p = static_cast<std::size_t>(data.covariates.cols());
  const std::size_t keep = resolve_selected_size(config, n, p);
  const IntervalCodes codes(data);
  const TurnbullFit overall = turnbull_fit(codes.left, codes.right, codes.total, options);
  ScreeningResult res;
  res.d.resize(p);
  res.d1.resize(p);
  res.d2.resize(p);
  res.skipped_term_counts.resize(p);
  parallel_for(p, config.workers, [&](std::size_t j) {
    const auto col = data.covariates.col(static_cast<Eigen::Index>(j));
    const FeatureDiscrepancy fd = scan_feature(codes, overall, std::span<const double>(col.data(), n),
                                               config.min_stratum_size, options);
    res.d[j] = fd.d;
    res.d1[j] = fd.d1;
    res.d2[j] = fd.d2;
    res.skipped_term_counts[j] = fd.skipped_terms;
  });
  finalize_ranking(res, keep);
  return res;
}

std::pair<double, double> bracket_on_grid(double t, double horizon) {
  if (!(t >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "event time must be >= 0");
  if (t > horizon) return {horizon, kInf};
  const double up = std::max(std::ceil(t), 1.0);
  return {up - 1.0, std::min(up, horizon)};
}

GeneratedIntervalData gen_interval_data(const ScenarioSpec& spec) {
  validate_spec(spec);
  if (is_toy(spec.scenario) || spec.scenario == Scenario::kS5) {
    throw Error(ErrorCode::kInvalidArgument, "interval data is generated for S1..S4 only");
  }
  GeneratedIntervalData out;
  out.horizon = spec.target_censoring == 0.0
                    ? kInf
                    : quantile_type7(pilot_event_times(spec), 1.0 - spec.target_censoring);
  Rng rng(spec.seed);
  Eigen::MatrixXd x = gen_covariates(spec, rng);
  out.event_times = gen_event_times(x, spec, rng);
  std::vector<double> left(spec.n), right(spec.n);
  std::size_t censored = 0;
  for (std::size_t i = 0; i < spec.n; ++i) {
    std::tie(left[i], right[i]) = bracket_on_grid(out.event_times[i], out.horizon);
    if (std::isinf(right[i])) ++censored;
  }
  out.right_censored_share = static_cast<double>(censored) / static_cast<double>(spec.n);
  out.active_set = active_set(spec.scenario);
  out.data = make_interval_dataset(std::move(x), std::move(left), std::move(right));
  return out;
}

}  // namespace rmstscreen
