#include "rmstscreen/km.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rmstscreen/error.hpp"

namespace rmstscreen {

SurvivalCurve::SurvivalCurve(CurveKind kind, std::vector<double> times,
                             std::vector<double> values)
    : kind_(kind), times_(std::move(times)), values_(std::move(values)) {
  if (times_.size() != values_.size()) {
    throw Error(ErrorCode::kShapeMismatch, "curve times and values differ in length");
  }
  for (std::size_t k = 0; k < times_.size(); ++k) {
    if (!(times_[k] >= 0.0) || (k > 0 && !(times_[k] > times_[k - 1]))) {
      throw Error(ErrorCode::kInvalidArgument, "curve knots must be strictly increasing and >= 0");
    }
    const double prev = k == 0 ? 1.0 : values_[k - 1];
    if (!(values_[k] >= 0.0 && values_[k] <= prev)) {
      throw Error(ErrorCode::kInvalidArgument, "curve values must be non-increasing in [0, 1]");
    }
  }
  cum_.resize(times_.size());
  if (times_.empty()) return;
  cum_[0] = times_[0];
  for (std::size_t k = 1; k < times_.size(); ++k) {
    const double width = times_[k] - times_[k - 1];
    const double area = kind_ == CurveKind::kStep
                            ? values_[k - 1] * width
                            : 0.5 * (values_[k - 1] + values_[k]) * width;
    cum_[k] = cum_[k - 1] + area;
  }
}

SurvivalCurve SurvivalCurve::step(std::vector<double> times, std::vector<double> values) {
  return SurvivalCurve(CurveKind::kStep, std::move(times), std::move(values));
}

SurvivalCurve SurvivalCurve::linear(std::vector<double> times, std::vector<double> values) {
  return SurvivalCurve(CurveKind::kLinear, std::move(times), std::move(values));
}

double SurvivalCurve::operator()(double t) const {
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  if (it == times_.begin()) return 1.0;
  const auto k = static_cast<std::size_t>(it - times_.begin()) - 1;
  if (kind_ == CurveKind::kStep || k + 1 == times_.size()) return values_[k];
  const double frac = (t - times_[k]) / (times_[k + 1] - times_[k]);
  return values_[k] + frac * (values_[k + 1] - values_[k]);
}

double SurvivalCurve::integral(double tau) const {
  auto it = std::upper_bound(times_.begin(), times_.end(), tau);
  if (it == times_.begin()) return tau;
  const auto k = static_cast<std::size_t>(it - times_.begin()) - 1;
  const double width = tau - times_[k];
  if (kind_ == CurveKind::kStep || k + 1 == times_.size()) {
    return cum_[k] + values_[k] * width;
  }
  return cum_[k] + 0.5 * (values_[k] + (*this)(tau)) * width;
}

SurvivalCurve km_fit(std::span<const double> time, std::span<const int> status) {
  if (time.empty()) throw Error(ErrorCode::kInvalidArgument, "km_fit: empty input");
  if (time.size() != status.size()) {
    throw Error(ErrorCode::kShapeMismatch, "km_fit: time and status lengths differ");
  }
  std::vector<std::size_t> order(time.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return time[a] < time[b]; });

  std::vector<double> jumps;
  std::vector<double> values;
  double surv = 1.0;
  std::size_t at_risk = time.size();
  for (std::size_t k = 0; k < order.size();) {
    const double t = time[order[k]];
    std::size_t deaths = 0;
    std::size_t leaving = 0;
    for (; k < order.size() && time[order[k]] == t; ++k) {
      deaths += status[order[k]] == 1 ? 1 : 0;
      ++leaving;
    }
    if (deaths > 0) {
      surv *= 1.0 - static_cast<double>(deaths) / static_cast<double>(at_risk);
      jumps.push_back(t);
      values.push_back(surv);
    }
    at_risk -= leaving;
  }
  if (jumps.empty()) throw Error(ErrorCode::kNoEvents, "km_fit: no events");
  return SurvivalCurve::step(std::move(jumps), std::move(values));
}

double rmst(const SurvivalCurve& curve, double tau) {
  if (!(tau >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "rmst: negative tau");
  return curve.integral(tau);
}

std::optional<double> restriction_time(std::span<const double> time,
                                       std::span<const int> status) {
  std::optional<double> tau;
  for (std::size_t i = 0; i < time.size() && i < status.size(); ++i) {
    if (status[i] == 1 && (!tau || time[i] > *tau)) tau = time[i];
  }
  return tau;
}

}  // namespace rmstscreen
