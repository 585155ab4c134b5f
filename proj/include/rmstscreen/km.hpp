#pragma once

#include <optional>
#include <span>
#include <vector>

namespace rmstscreen {

enum class CurveKind { kStep, kLinear };

// Survival function with cached cumulative integral.
//
// Step curves take value values[k] on [times[k], times[k+1]). Linear curves
// interpolate between knots (times[k], values[k]). Both equal 1 before the
// first knot and stay constant after the last one, which makes integrals
// total for any horizon.
class SurvivalCurve {
 public:
  // The identity curve S == 1.
  SurvivalCurve() = default;

  static SurvivalCurve step(std::vector<double> times, std::vector<double> values);
  static SurvivalCurve linear(std::vector<double> times, std::vector<double> values);

  CurveKind kind() const { return kind_; }
  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& values() const { return values_; }
  // cum_integral()[k] = integral of S over [0, times()[k]].
  const std::vector<double>& cum_integral() const { return cum_; }

  double operator()(double t) const;

  // Integral of S over [0, tau]; O(log n).
  double integral(double tau) const;

 private:
  SurvivalCurve(CurveKind kind, std::vector<double> times, std::vector<double> values);

  CurveKind kind_ = CurveKind::kStep;
  std::vector<double> times_;
  std::vector<double> values_;
  std::vector<double> cum_;
};

// Product-limit estimate. Jumps sit exactly at the distinct event times;
// subjects censored at an event time stay in that time's risk set.
SurvivalCurve km_fit(std::span<const double> time, std::span<const int> status);

// Restricted mean survival time: integral of the curve over [0, tau].
double rmst(const SurvivalCurve& curve, double tau);

// Largest uncensored time, or nullopt when there are no events.
std::optional<double> restriction_time(std::span<const double> time,
                                       std::span<const int> status);

}  // namespace rmstscreen
