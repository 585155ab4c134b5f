#include "rmstscreen/screening.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rmstscreen/parallel.hpp"

namespace rmstscreen {

std::vector<std::size_t> ScreeningResult::rank_positions() const {
  std::vector<std::size_t> pos(ranking.size());
  for (std::size_t r = 0; r < ranking.size(); ++r) pos[ranking[r]] = r + 1;
  return pos;
}

std::size_t n_over_log_n(std::size_t n) {
  if (n < 2) return 1;
  return static_cast<std::size_t>(
      std::floor(static_cast<double>(n) / std::log(static_cast<double>(n))));
}

std::size_t resolve_selected_size(const ScreeningConfig& config, std::size_t n, std::size_t p) {
  if (config.selected_size) {
    if (*config.selected_size == 0 || *config.selected_size > p) {
      throw Error(ErrorCode::kInvalidArgument,
                  "selected size must be in [1, p] (p = " + std::to_string(p) + ")");
    }
    return *config.selected_size;
  }
  return std::min(n_over_log_n(n), p);
}

std::vector<std::size_t> dense_ranks(std::span<const double> x, std::size_t* distinct) {
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<std::size_t> rank(n);
  std::size_t r = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0 && x[order[k]] != x[order[k - 1]]) ++r;
    rank[order[k]] = r;
  }
  if (distinct) *distinct = n == 0 ? 0 : r + 1;
  return rank;
}

RmstScreener::RmstScreener(const Dataset& data)
    : overall_(km_fit(data.time, data.status)) {
  const std::size_t n = data.rows();
  order_.resize(n);
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  std::stable_sort(order_.begin(), order_.end(),
                   [&](std::size_t a, std::size_t b) { return data.time[a] < data.time[b]; });
  time_sorted_.resize(n);
  status_sorted_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    time_sorted_[k] = data.time[order_[k]];
    status_sorted_[k] = data.status[order_[k]];
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (k == 0 || time_sorted_[k] != time_sorted_[k - 1]) group_start_.push_back(k);
  }
  group_start_.push_back(n);
}

namespace {

// Product-limit scan of one stratum, integrating up to its last event.
// Performs the same floating-point operations as km_fit followed by
// SurvivalCurve::integral at that event time.
struct StratumScan {
  std::size_t at_risk;
  double surv = 1.0;
  double area = 0.0;
  double prev = 0.0;
  double tau = 0.0;
  bool any_event = false;

  void group(double t, std::size_t deaths, std::size_t leaving) {
    if (deaths > 0) {
      area += surv * (t - prev);
      prev = t;
      surv *= 1.0 - static_cast<double>(deaths) / static_cast<double>(at_risk);
      tau = t;
      any_event = true;
    }
    at_risk -= leaving;
  }
};

}  // namespace

FeatureDiscrepancy RmstScreener::discrepancy(std::span<const double> x,
                                             std::size_t min_stratum_size) const {
  const std::size_t n = order_.size();
  if (x.size() != n) throw Error(ErrorCode::kShapeMismatch, "covariate length differs from n");
  std::size_t levels = 0;
  const std::vector<std::size_t> rank = dense_ranks(x, &levels);

  std::vector<std::size_t> rank_sorted(n);
  std::vector<std::size_t> below(levels + 1, 0);  // below[r] = #{k : rank_k < r}
  for (std::size_t k = 0; k < n; ++k) {
    rank_sorted[k] = rank[order_[k]];
    ++below[rank[k] + 1];
  }
  for (std::size_t r = 1; r <= levels; ++r) below[r] += below[r - 1];

  constexpr double kSkipped = -1.0;
  std::vector<double> upper_term(levels, kSkipped);
  std::vector<double> lower_term(levels, kSkipped);

  for (std::size_t r = 0; r < levels; ++r) {
    const std::size_t lower_size = below[r];
    const std::size_t upper_size = n - lower_size;
    const bool want_upper = upper_size >= min_stratum_size && upper_size > 0;
    const bool want_lower = lower_size >= min_stratum_size && lower_size > 0;
    if (!want_upper && !want_lower) continue;

    StratumScan up{upper_size};
    StratumScan lo{lower_size};
    for (std::size_t g = 0; g + 1 < group_start_.size(); ++g) {
      std::size_t du = 0, cu = 0, dl = 0, cl = 0;
      for (std::size_t k = group_start_[g]; k < group_start_[g + 1]; ++k) {
        if (rank_sorted[k] >= r) {
          ++cu;
          du += static_cast<std::size_t>(status_sorted_[k]);
        } else {
          ++cl;
          dl += static_cast<std::size_t>(status_sorted_[k]);
        }
      }
      const double t = time_sorted_[group_start_[g]];
      if (cu > 0) up.group(t, du, cu);
      if (cl > 0) lo.group(t, dl, cl);
    }
    if (want_upper && up.any_event) {
      upper_term[r] = std::abs(up.area - overall_.integral(up.tau));
    }
    if (want_lower && lo.any_event) {
      lower_term[r] = std::abs(lo.area - overall_.integral(lo.tau));
    }
  }

  FeatureDiscrepancy out;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = upper_term[rank[i]];
    const double l = lower_term[rank[i]];
    if (u == kSkipped) ++out.skipped_terms; else out.d1 += u;
    if (l == kSkipped) ++out.skipped_terms; else out.d2 += l;
  }
  out.d1 /= static_cast<double>(n);
  out.d2 /= static_cast<double>(n);
  out.d = out.d1 + out.d2;
  return out;
}

FeatureDiscrepancy rmst_discrepancy(const Dataset& data, std::size_t j,
                                    const ScreeningConfig& config) {
  if (j >= data.cols()) {
    throw Error(ErrorCode::kInvalidArgument, "feature index " + std::to_string(j) + " out of range");
  }
  const RmstScreener screener(data);
  const auto col = data.covariates.col(static_cast<Eigen::Index>(j));
  return screener.discrepancy(std::span<const double>(col.data(), data.rows()),
                              config.min_stratum_size);
}

void finalize_ranking(ScreeningResult& result, std::size_t selected_size) {
  const std::size_t p = result.d.size();
  result.ranking.resize(p);
  std::iota(result.ranking.begin(), result.ranking.end(), std::size_t{0});
  std::stable_sort(result.ranking.begin(), result.ranking.end(),
                   [&](std::size_t a, std::size_t b) { return result.d[a] > result.d[b]; });
  result.selected.clear();
  for (std::size_t r = 0; r < p && result.selected.size() < selected_size; ++r) {
    const std::size_t j = result.ranking[r];
    if (result.d[j] == -std::numeric_limits<double>::infinity()) break;
    result.selected.push_back(j);
  }
}

ScreeningResult screen(const Dataset& data, const ScreeningConfig& config) {
  require_valid(data);
  const std::size_t p = data.cols();
  const std::size_t n = data.rows();
  const std::size_t selected_size = resolve_selected_size(config, n, p);
  const RmstScreener screener(data);

  ScreeningResult result;
  result.d.resize(p);
  result.d1.resize(p);
  result.d2.resize(p);
  result.skipped_term_counts.resize(p);
  parallel_for(p, config.workers, [&](std::size_t j) {
    const auto col = data.covariates.col(static_cast<Eigen::Index>(j));
    const FeatureDiscrepancy f =
        screener.discrepancy(std::span<const double>(col.data(), n), config.min_stratum_size);
    result.d[j] = f.d;
    result.d1[j] = f.d1;
    result.d2[j] = f.d2;
    result.skipped_term_counts[j] = f.skipped_terms;
  });
  finalize_ranking(result, selected_size);
  return result;
}

FeatureDiscrepancy uncensored_discrepancy(std::span<const double> y, std::span<const double> x,
                                          const ScreeningConfig& config) {
  const std::size_t n = y.size();
  if (x.size() != n) throw Error(ErrorCode::kShapeMismatch, "y and x lengths differ");
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "need at least 2 observations");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });

  // Running means over suffixes (upper strata) and prefixes (lower strata)
  // of the x-sorted order. Running updates keep constant responses exact.
  std::vector<double> suffix_mean(n + 1, 0.0);
  for (std::size_t k = n; k-- > 0;) {
    const double count = static_cast<double>(n - k);
    suffix_mean[k] = k + 1 == n ? y[order[k]]
                                : suffix_mean[k + 1] + (y[order[k]] - suffix_mean[k + 1]) / count;
  }
  std::vector<double> prefix_mean(n + 1, 0.0);  // prefix_mean[k] = mean of first k
  for (std::size_t k = 0; k < n; ++k) {
    prefix_mean[k + 1] = k == 0 ? y[order[0]]
                                : prefix_mean[k] + (y[order[k]] - prefix_mean[k]) / static_cast<double>(k + 1);
  }
  const double overall = suffix_mean[0];

  FeatureDiscrepancy out;
  std::size_t first = 0;  // first sorted position of the current tie block
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0 && x[order[k]] != x[order[k - 1]]) first = k;
    const std::size_t lower_size = first;
    const std::size_t upper_size = n - first;
    if (upper_size >= config.min_stratum_size && upper_size > 0) {
      out.d1 += std::abs(suffix_mean[first] - overall);
    } else {
      ++out.skipped_terms;
    }
    if (lower_size >= config.min_stratum_size && lower_size > 0) {
      out.d2 += std::abs(prefix_mean[first] - overall);
    } else {
      ++out.skipped_terms;
    }
  }
  out.d1 /= static_cast<double>(n);
  out.d2 /= static_cast<double>(n);
  out.d = out.d1 + out.d2;
  return out;
}

ScreeningResult screen_uncensored(std::span<const double> y, const Eigen::MatrixXd& covariates,
                                  const std::vector<std::size_t>& exclude,
                                  const ScreeningConfig& config) {
  const std::size_t n = y.size();
  const auto p = static_cast<std::size_t>(covariates.cols());
  if (static_cast<std::size_t>(covariates.rows()) != n) {
    throw Error(ErrorCode::kShapeMismatch, "response length differs from covariate rows");
  }
  std::vector<char> excluded(p, 0);
  for (std::size_t j : exclude) {
    if (j >= p) throw Error(ErrorCode::kInvalidArgument, "excluded index out of range");
    excluded[j] = 1;
  }
  std::size_t selected_size = 0;
  if (config.selected_size) {
    selected_size = std::min(*config.selected_size, p);
  } else {
    selected_size = std::min(n_over_log_n(n), p);
  }

  ScreeningResult result;
  result.d.assign(p, -std::numeric_limits<double>::infinity());
  result.d1.assign(p, -std::numeric_limits<double>::infinity());
  result.d2.assign(p, -std::numeric_limits<double>::infinity());
  result.skipped_term_counts.assign(p, 0);
  parallel_for(p, config.workers, [&](std::size_t j) {
    if (excluded[j]) return;
    const auto col = covariates.col(static_cast<Eigen::Index>(j));
    const FeatureDiscrepancy f =
        uncensored_discrepancy(y, std::span<const double>(col.data(), n), config);
    result.d[j] = f.d;
    result.d1[j] = f.d1;
    result.d2[j] = f.d2;
    result.skipped_term_counts[j] = f.skipped_terms;
  });
  finalize_ranking(result, selected_size);
  return result;
}

}  // namespace rmstscreen
