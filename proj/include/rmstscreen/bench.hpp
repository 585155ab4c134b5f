#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rmstscreen/iterative.hpp"
#include "rmstscreen/screening.hpp"
#include "rmstscreen/simgen.hpp"

namespace rmstscreen {

enum class Method { kMarginal, kIterative, kInterval };

Method parse_method(const std::string& name);
std::string method_name(Method m);

// Largest 1-based ranking position among the active features.
std::size_t min_model_size(std::span<const std::size_t> ranking,
                           std::span<const std::size_t> active);

struct BenchConfig {
  Method method = Method::kMarginal;
  std::size_t reps = 50;
  std::uint64_t seed = 1;  // replication r uses derive_seed(seed, r)
  std::size_t workers = 0;
  ScreeningConfig screening;
  IterativeConfig iterative;
};

struct BenchmarkReport {
  ScenarioSpec spec;
  Method method = Method::kMarginal;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
  std::size_t selected_size = 0;          // size at which P_all is taken
  std::vector<std::size_t> per_rep_mms;   // empty for the iterative method
  std::vector<bool> per_rep_all;          // every active feature captured
  std::vector<double> per_rep_censoring;  // realized censoring share
  std::optional<double> median_mms;
  std::optional<double> iqr_mms;
  double p_all = 0.0;
  double runtime_seconds = 0.0;
};

BenchmarkReport run_replications(const ScenarioSpec& spec, const BenchConfig& config);

struct ExceedanceResult {
  Scenario model = Scenario::kToyVI;
  double c = 0.0;
  std::size_t reps = 0;
  // Share of replications where the statistic of the signal X strictly
  // exceeds that of the noise Z.
  double d = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

ExceedanceResult toy_exceedance(Scenario model, std::optional<double> c, std::size_t reps,
                                std::uint64_t seed, std::size_t n = 200,
                                double target_censoring = 0.2, std::size_t workers = 0);

}  // namespace rmstscreen
