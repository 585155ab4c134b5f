#include "rmstscreen/simgen.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "rmstscreen/error.hpp"

namespace rmstscreen {
namespace {

constexpr std::size_t kPilotDraws = 20000;
constexpr std::uint64_t kPilotSeed = 20240611;

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return s;
}

// x_1 = z_1, x_j = rho x_{j-1} + sqrt(1 - rho^2) z_j gives corr 0.5^{|i-j|}.
void fill_ar1(Eigen::Ref<Eigen::RowVectorXd> row, double rho, Rng& rng) {
  const double s = std::sqrt(1.0 - rho * rho);
  for (Eigen::Index j = 0; j < row.size(); ++j) {
    const double z = rng.normal();
    row[j] = j == 0 ? z : rho * row[j - 1] + s * z;
  }
}

void fill_equicorrelated(Eigen::Ref<Eigen::RowVectorXd> row, double rho, Rng& rng) {
  const double shared = std::sqrt(rho) * rng.normal();
  const double s = std::sqrt(1.0 - rho);
  for (Eigen::Index j = 0; j < row.size(); ++j) row[j] = shared + s * rng.normal();
}

double student_t2(Rng& rng) { return rng.normal() / std::sqrt(rng.chi_square_2() / 2.0); }

}  // namespace

Scenario parse_scenario(const std::string& name) {
  static const std::map<std::string, Scenario> table = {
      {"s1", Scenario::kS1},          {"s2", Scenario::kS2},          {"s3", Scenario::kS3},
      {"s4", Scenario::kS4},          {"s5", Scenario::kS5},          {"toy-i", Scenario::kToyI},
      {"toy-ii", Scenario::kToyII},   {"toy-iii", Scenario::kToyIII}, {"toy-iv", Scenario::kToyIV},
      {"toy-v", Scenario::kToyV},     {"toy-vi", Scenario::kToyVI}};
  auto it = table.find(lower(name));
  if (it == table.end()) {
    throw Error(ErrorCode::kUnknownScenario,
                "unknown scenario '" + name + "' (expected S1..S5 or toy-i..toy-vi)");
  }
  return it->second;
}

std::string scenario_name(Scenario s) {
  switch (s) {
    case Scenario::kS1: return "S1";
    case Scenario::kS2: return "S2";
    case Scenario::kS3: return "S3";
    case Scenario::kS4: return "S4";
    case Scenario::kS5: return "S5";
    case Scenario::kToyI: return "toy-i";
    case Scenario::kToyII: return "toy-ii";
    case Scenario::kToyIII: return "toy-iii";
    case Scenario::kToyIV: return "toy-iv";
    case Scenario::kToyV: return "toy-v";
    case Scenario::kToyVI: return "toy-vi";
  }
  return "?";
}

bool is_toy(Scenario s) {
  return s == Scenario::kToyI || s == Scenario::kToyII || s == Scenario::kToyIII ||
         s == Scenario::kToyIV || s == Scenario::kToyV || s == Scenario::kToyVI;
}

ErrorDist parse_error_dist(const std::string& name) {
  const std::string s = lower(name);
  if (s == "normal") return ErrorDist::kNormal;
  if (s == "extreme") return ErrorDist::kExtreme;
  if (s == "logistic") return ErrorDist::kLogistic;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown error distribution '" + name + "' (expected normal, extreme, logistic)");
}

std::string error_dist_name(ErrorDist e) {
  switch (e) {
    case ErrorDist::kNormal: return "normal";
    case ErrorDist::kExtreme: return "extreme";
    case ErrorDist::kLogistic: return "logistic";
  }
  return "?";
}

double default_rho(const ScenarioSpec& spec) { return spec.rho.value_or(0.5); }

double default_c(Scenario s) {
  switch (s) {
    case Scenario::kToyIV: return 0.1;
    case Scenario::kToyV: return 0.3;
    default: return 0.5;
  }
}

std::vector<std::size_t> active_set(Scenario s) {
  switch (s) {
    case Scenario::kS1:
    case Scenario::kS5: return {0, 1, 8, 9};
    case Scenario::kS2:
    case Scenario::kS3: return {0, 1, 2, 7, 8};
    case Scenario::kS4: return {0, 1, 7, 8};
    default: return {0};
  }
}

void validate_spec(const ScenarioSpec& spec) {
  if (spec.n < 10) throw Error(ErrorCode::kInvalidArgument, "n must be >= 10");
  const std::size_t min_p = is_toy(spec.scenario) ? 2 : active_set(spec.scenario).back() + 1;
  if (spec.p < min_p) {
    throw Error(ErrorCode::kInvalidArgument, scenario_name(spec.scenario) + " needs p >= " +
                                                 std::to_string(min_p));
  }
  if (!(spec.target_censoring >= 0.0 && spec.target_censoring < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "target censoring must lie in [0, 1)");
  }
  const double rho = default_rho(spec);
  const bool equi = spec.scenario == Scenario::kS5;
  if (!(equi ? (rho >= 0.0 && rho < 1.0) : (rho > -1.0 && rho < 1.0))) {
    throw Error(ErrorCode::kInvalidArgument, "rho out of range");
  }
  if (spec.c && !std::isfinite(*spec.c)) throw Error(ErrorCode::kInvalidArgument, "c must be finite");
}

double transform_H(double t) {
  // log(0.5) + log(e^{2t} - 1), written to stay accurate for large t.
  if (t > 10.0) return 2.0 * t + std::log(0.5) + std::log1p(-std::exp(-2.0 * t));
  return std::log(0.5) + std::log(std::expm1(2.0 * t));
}

double invert_H(double z) {
  if (z > 0.0) return 0.5 * (z + std::log(2.0) + std::log1p(0.5 * std::exp(-z)));
  return 0.5 * std::log1p(2.0 * std::exp(z));
}

double draw_error(ErrorDist e, Rng& rng) {
  switch (e) {
    case ErrorDist::kNormal: return rng.normal();
    case ErrorDist::kExtreme: return std::log(-std::log(rng.uniform()));
    case ErrorDist::kLogistic: {
      const double u = rng.uniform();
      return std::log(u / (1.0 - u));
    }
  }
  return 0.0;
}

Eigen::MatrixXd ar1_normal(std::size_t n, std::size_t p, double rho, Rng& rng) {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  Eigen::RowVectorXd row(static_cast<Eigen::Index>(p));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    fill_ar1(row, rho, rng);
    x.row(i) = row;
  }
  return x;
}

Eigen::MatrixXd equicorrelated_normal(std::size_t n, std::size_t p, double rho, Rng& rng) {
  if (!(rho >= 0.0 && rho < 1.0)) throw Error(ErrorCode::kInvalidArgument, "rho must lie in [0, 1)");
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  Eigen::RowVectorXd row(static_cast<Eigen::Index>(p));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    fill_equicorrelated(row, rho, rng);
    x.row(i) = row;
  }
  return x;
}

Eigen::MatrixXd gen_covariates(const ScenarioSpec& spec, std::size_t cols, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(spec.n);
  const auto p = static_cast<Eigen::Index>(cols);
  Eigen::MatrixXd x(n, p);
  const double rho = default_rho(spec);
  Eigen::RowVectorXd row(p), contamination(p);
  for (Eigen::Index i = 0; i < n; ++i) {
    switch (spec.scenario) {
      case Scenario::kS1:
      case Scenario::kS2:
      case Scenario::kS4:
        fill_ar1(row, rho, rng);
        break;
      case Scenario::kS3:
        fill_ar1(row, rho, rng);
        for (Eigen::Index j = 0; j < p; ++j) contamination[j] = student_t2(rng);
        row = 0.9 * row + 0.1 * contamination;
        break;
      case Scenario::kS5: {
        fill_equicorrelated(row, rho, rng);
        fill_ar1(contamination, 0.5, rng);
        const double scale = std::sqrt(rng.chi_square_2() / 2.0);
        row = 0.9 * row + (0.1 / scale) * contamination;
        break;
      }
      default:
        for (Eigen::Index j = 0; j < p; ++j) row[j] = rng.normal();
        break;
    }
    x.row(i) = row;
  }
  return x;
}

Eigen::MatrixXd gen_covariates(const ScenarioSpec& spec, Rng& rng) {
  return gen_covariates(spec, spec.p, rng);
}

double scenario_predictor(const ScenarioSpec& spec, const Eigen::Ref<const Eigen::RowVectorXd>& x) {
  const double c = spec.c.value_or(default_c(spec.scenario));
  switch (spec.scenario) {
    case Scenario::kS1: return -(1.0 * x[0] + 0.9 * x[1] - 0.8 * x[8] - 1.0 * x[9]);
    case Scenario::kS5: return -(2.0 * x[0] + 1.8 * x[1] - 1.6 * x[8] - 2.0 * x[9]);
    case Scenario::kS2:
    case Scenario::kS3:
      return -4.0 * std::cos(2.0 * x[0]) + 2.2 * x[1] * x[1] - 2.4 * x[2] +
             0.9 * (x[7] - 1.0) * (x[7] - 1.0) + 2.2 * std::sin(x[8] - 3.0);
    case Scenario::kS4: {
      const double x1 = x[0], x2 = x[1], x8 = x[7], x9 = x[8];
      const double h1 = (x1 <= -0.8 || x1 > 0.8) ? 0.6 * x1 * x1 : 0.0;
      const double h2 = x2 < -1.0 ? 1.2 * x2 : 0.0;
      const double h3 = (x8 > -1.0 && x8 < 0.0) ? 1.8 : 0.2;
      const double h4 = (x9 >= -1.0 && x9 <= 0.5) ? 1.8 : 0.0;
      return h1 + h2 + h3 + h4;
    }
    case Scenario::kToyI: return -c * ((x[0] <= -1.0 ? 1.0 : 0.0) + (x[0] >= 1.0 ? 1.0 : 0.0));
    case Scenario::kToyII: return c * (x[0] <= -1.0 ? 1.0 : 0.0);
    case Scenario::kToyIII: return c * (x[0] >= 1.0 ? 1.0 : 0.0);
    case Scenario::kToyIV: {
      const double h = x[0] / 2.0;
      return c * (h * h * h + x[0] * x[0] + x[0] / 3.0 - 0.5);
    }
    case Scenario::kToyV: return c * std::cos(3.0 * x[0] + 0.5);
    case Scenario::kToyVI: return c * x[0];
  }
  throw Error(ErrorCode::kUnknownScenario, "unknown scenario");
}

std::vector<double> gen_event_times(const Eigen::MatrixXd& x, const ScenarioSpec& spec, Rng& rng) {
  std::vector<double> t(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double eps = is_toy(spec.scenario) ? 0.6 * rng.normal() : draw_error(spec.error, rng);
    t[static_cast<std::size_t>(i)] = invert_H(scenario_predictor(spec, x.row(i)) + eps);
  }
  return t;
}

const std::vector<double>& pilot_event_times(const ScenarioSpec& spec) {
  using Key = std::tuple<int, int, double, double>;
  static std::mutex mutex;
  static std::map<Key, std::unique_ptr<std::vector<double>>> cache;
  const bool toy = is_toy(spec.scenario);
  const Key key{static_cast<int>(spec.scenario), toy ? -1 : static_cast<int>(spec.error),
                default_rho(spec), spec.c.value_or(default_c(spec.scenario))};
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[key];
  if (!slot) {
    ScenarioSpec pilot = spec;
    pilot.n = kPilotDraws;
    const std::size_t cols = active_set(spec.scenario).back() + 1;
    Rng rng(kPilotSeed, static_cast<std::uint64_t>(spec.scenario));
    const Eigen::MatrixXd x = gen_covariates(pilot, cols, rng);
    slot = std::make_unique<std::vector<double>>(gen_event_times(x, pilot, rng));
  }
  return *slot;
}

double calibrate_censoring_bound(std::span<const double> t, double target, double tolerance) {
  if (t.empty()) throw Error(ErrorCode::kInvalidArgument, "calibration needs event times");
  if (!(target >= 0.0 && target < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "target censoring must lie in [0, 1)");
  }
  if (target == 0.0) return std::numeric_limits<double>::infinity();
  auto rate = [&](double u) {
    double s = 0.0;
    for (double ti : t) s += std::min(ti / u, 1.0);
    return s / static_cast<double>(t.size());
  };
  // rate(u) decreases in u; bisect on log u.
  double lo = std::log(1e-6), hi = std::log(1e6);
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (rate(std::exp(mid)) > target) lo = mid;
    else hi = mid;
  }
  const double u = std::exp(0.5 * (lo + hi));
  if (std::abs(rate(u) - target) > tolerance) {
    throw Error(ErrorCode::kUnattainable,
                "censoring target " + format_double(target) + " unattainable for u in [1e-6, 1e6]");
  }
  return u;
}

double calibrate_censoring(const ScenarioSpec& spec, double tolerance) {
  validate_spec(spec);
  using Key = std::tuple<int, int, double, double, double, double>;
  static std::mutex mutex;
  static std::map<Key, double> cache;
  const Key key{static_cast<int>(spec.scenario),
                is_toy(spec.scenario) ? -1 : static_cast<int>(spec.error), default_rho(spec),
                spec.c.value_or(default_c(spec.scenario)), spec.target_censoring, tolerance};
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  const double u = calibrate_censoring_bound(pilot_event_times(spec), spec.target_censoring, tolerance);
  std::lock_guard<std::mutex> lock(mutex);
  cache.emplace(key, u);
  return u;
}

GeneratedData generate(const ScenarioSpec& spec) {
  validate_spec(spec);
  GeneratedData out;
  out.u = calibrate_censoring(spec);
  Rng rng(spec.seed);
  Eigen::MatrixXd x = gen_covariates(spec, rng);
  out.event_times = gen_event_times(x, spec, rng);
  std::vector<double> time(spec.n);
  std::vector<int> status(spec.n);
  std::size_t censored = 0;
  for (std::size_t i = 0; i < spec.n; ++i) {
    const double t = out.event_times[i];
    const double c = std::isinf(out.u) ? std::numeric_limits<double>::infinity() : out.u * rng.uniform();
    time[i] = std::min(t, c);
    status[i] = t <= c ? 1 : 0;
    censored += static_cast<std::size_t>(1 - status[i]);
  }
  out.censoring_rate = static_cast<double>(censored) / static_cast<double>(spec.n);
  out.active_set = active_set(spec.scenario);
  if (censored == spec.n) {
    throw Error(ErrorCode::kNoEvents, "generated sample has no events; raise n or lower censoring");
  }
  out.data = make_dataset(std::move(x), std::move(time), std::move(status));
  return out;
}

}  // namespace rmstscreen
