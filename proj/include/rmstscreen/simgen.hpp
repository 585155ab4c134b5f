#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rmstscreen/random.hpp"
#include "rmstscreen/survdata.hpp"

namespace rmstscreen {

enum class Scenario { kS1, kS2, kS3, kS4, kS5, kToyI, kToyII, kToyIII, kToyIV, kToyV, kToyVI };
enum class ErrorDist { kNormal, kExtreme, kLogistic };

Scenario parse_scenario(const std::string& name);
std::string scenario_name(Scenario s);
bool is_toy(Scenario s);
ErrorDist parse_error_dist(const std::string& name);
std::string error_dist_name(ErrorDist e);

struct ScenarioSpec {
  Scenario scenario = Scenario::kS1;
  std::size_t n = 200;
  std::size_t p = 500;
  ErrorDist error = ErrorDist::kNormal;  // toy models always use N(0, 0.6^2)
  double target_censoring = 0.2;
  std::optional<double> rho;  // default 0.5 where a correlation applies
  std::optional<double> c;    // toy coefficient; default per model
  std::uint64_t seed = 1;
};

double default_rho(const ScenarioSpec& spec);
double default_c(Scenario s);
void validate_spec(const ScenarioSpec& spec);

// True active features, 0-based. Toy models: the signal is column 0 and
// the noise variable column 1.
std::vector<std::size_t> active_set(Scenario s);

double transform_H(double t);  // log(0.5 (e^{2t} - 1))
double invert_H(double z);     // 0.5 log(1 + 2 e^z)

double draw_error(ErrorDist e, Rng& rng);

// Gaussian building blocks: AR(1) with corr rho^{|i-j|}, and equicorrelated
// with corr rho off the diagonal (rho >= 0).
Eigen::MatrixXd ar1_normal(std::size_t n, std::size_t p, double rho, Rng& rng);
Eigen::MatrixXd equicorrelated_normal(std::size_t n, std::size_t p, double rho, Rng& rng);

// n x cols covariates for the scenario.
Eigen::MatrixXd gen_covariates(const ScenarioSpec& spec, std::size_t cols, Rng& rng);
Eigen::MatrixXd gen_covariates(const ScenarioSpec& spec, Rng& rng);

// Value of H(T) without the error term.
double scenario_predictor(const ScenarioSpec& spec, const Eigen::Ref<const Eigen::RowVectorXd>& x);

std::vector<double> gen_event_times(const Eigen::MatrixXd& x, const ScenarioSpec& spec, Rng& rng);

// Latent event times of a 20000-draw pilot with a fixed seed; cached per
// (scenario, error, rho, c).
const std::vector<double>& pilot_event_times(const ScenarioSpec& spec);

// u such that the expected share of C ~ U[0, u] falling below T matches the
// target, using the exact conditional rate mean(min(T / u, 1)). Target 0
// gives +inf (no censoring).
double calibrate_censoring_bound(std::span<const double> t, double target, double tolerance = 0.01);
double calibrate_censoring(const ScenarioSpec& spec, double tolerance = 0.01);

struct GeneratedData {
  Dataset data;
  std::vector<std::size_t> active_set;
  std::vector<double> event_times;
  double u = 0.0;
  double censoring_rate = 0.0;
};

GeneratedData generate(const ScenarioSpec& spec);

}  // namespace rmstscreen
