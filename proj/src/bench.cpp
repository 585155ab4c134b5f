#include "rmstscreen/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cctype>

#include "rmstscreen/error.hpp"
#include "rmstscreen/interval.hpp"
#include "rmstscreen/parallel.hpp"
#include "rmstscreen/quantile.hpp"
#include "rmstscreen/random.hpp"

namespace rmstscreen {

Method parse_method(const std::string& name) {
  std::string s = name;
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (s == "marginal") return Method::kMarginal;
  if (s == "iterative") return Method::kIterative;
  if (s == "interval") return Method::kInterval;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown method '" + name + "' (expected marginal, iterative, interval)");
}

std::string method_name(Method m) {
  switch (m) {
    case Method::kMarginal: return "marginal";
    case Method::kIterative: return "iterative";
    case Method::kInterval: return "interval";
  }
  return "?";
}

std::size_t min_model_size(std::span<const std::size_t> ranking,
                           std::span<const std::size_t> active) {
  if (active.empty()) throw Error(ErrorCode::kInvalidArgument, "empty active set");
  std::size_t worst = 0;
  for (std::size_t a : active) {
    auto it = std::find(ranking.begin(), ranking.end(), a);
    if (it == ranking.end()) throw Error(ErrorCode::kInvalidArgument, "active feature missing from ranking");
    worst = std::max(worst, static_cast<std::size_t>(it - ranking.begin()) + 1);
  }
  return worst;
}

BenchmarkReport run_replications(const ScenarioSpec& spec, const BenchConfig& config) {
  if (config.reps < 1) throw Error(ErrorCode::kInvalidArgument, "reps must be >= 1");
  validate_spec(spec);
  const auto start = std::chrono::steady_clock::now();

  BenchmarkReport report;
  report.spec = spec;
  report.method = config.method;
  report.reps = config.reps;
  report.seed = config.seed;
  report.selected_size = resolve_selected_size(config.screening, spec.n, spec.p);
  const std::vector<std::size_t> active = active_set(spec.scenario);

  // Calibrate once up front so workers only read the cache.
  if (config.method == Method::kInterval) {
    (void)pilot_event_times(spec);
  } else {
    (void)calibrate_censoring(spec);
  }

  std::vector<std::size_t> mms(config.reps, 0);
  std::vector<char> all(config.reps, 0);
  std::vector<double> cens(config.reps, 0.0);
  parallel_for(config.reps, config.workers, [&](std::size_t r) {
    ScenarioSpec rep = spec;
    rep.seed = derive_seed(config.seed, r);
    ScreeningConfig sc = config.screening;
    sc.workers = 1;
    switch (config.method) {
      case Method::kMarginal: {
        const GeneratedData g = generate(rep);
        const ScreeningResult res = screen(g.data, sc);
        mms[r] = min_model_size(res.ranking, active);
        all[r] = mms[r] <= report.selected_size;
        cens[r] = g.censoring_rate;
        break;
      }
      case Method::kInterval: {
        const GeneratedIntervalData g = gen_interval_data(rep);
        const ScreeningResult res = interval_screen(g.data, sc);
        mms[r] = min_model_size(res.ranking, active);
        all[r] = mms[r] <= report.selected_size;
        cens[r] = g.right_censored_share;
        break;
      }
      case Method::kIterative: {
        const GeneratedData g = generate(rep);
        IterativeConfig ic = config.iterative;
        ic.screening = sc;
        ic.workers = 1;
        ic.seed = rep.seed;
        const IterativeResult res = iterative_screen(g.data, ic);
        all[r] = std::includes(res.selected.begin(), res.selected.end(), active.begin(), active.end());
        cens[r] = g.censoring_rate;
        break;
      }
    }
  });

  std::size_t hits = 0;
  for (std::size_t r = 0; r < config.reps; ++r) {
    report.per_rep_all.push_back(all[r] != 0);
    hits += all[r] != 0 ? 1 : 0;
  }
  report.per_rep_censoring = cens;
  report.p_all = static_cast<double>(hits) / static_cast<double>(config.reps);
  if (config.method != Method::kIterative) {
    report.per_rep_mms = mms;
    const std::vector<double> v(mms.begin(), mms.end());
    report.median_mms = quantile_type7(v, 0.5);
    report.iqr_mms = quantile_type7(v, 0.75) - quantile_type7(v, 0.25);
  }
  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

ExceedanceResult toy_exceedance(Scenario model, std::optional<double> c, std::size_t reps,
                                std::uint64_t seed, std::size_t n, double target_censoring,
                                std::size_t workers) {
  if (!is_toy(model)) throw Error(ErrorCode::kInvalidArgument, "exceedance needs a toy model");
  if (reps < 1) throw Error(ErrorCode::kInvalidArgument, "reps must be >= 1");
  ScenarioSpec spec;
  spec.scenario = model;
  spec.n = n;
  spec.p = 2;
  spec.c = c;
  spec.target_censoring = target_censoring;
  validate_spec(spec);
  (void)calibrate_censoring(spec);

  std::vector<int> wins(3 * reps, 0);
  parallel_for(reps, workers, [&](std::size_t r) {
    ScenarioSpec rep = spec;
    rep.seed = derive_seed(seed, r);
    const GeneratedData g = generate(rep);
    ScreeningConfig sc;
    sc.workers = 1;
    const FeatureDiscrepancy x = rmst_discrepancy(g.data, 0, sc);
    const FeatureDiscrepancy z = rmst_discrepancy(g.data, 1, sc);
    wins[3 * r] = x.d > z.d;
    wins[3 * r + 1] = x.d1 > z.d1;
    wins[3 * r + 2] = x.d2 > z.d2;
  });
  ExceedanceResult out;
  out.model = model;
  out.c = c.value_or(default_c(model));
  out.reps = reps;
  double sums[3] = {0, 0, 0};
  for (std::size_t r = 0; r < reps; ++r) {
    for (int k = 0; k < 3; ++k) sums[k] += wins[3 * r + static_cast<std::size_t>(k)];
  }
  const auto denom = static_cast<double>(reps);
  out.d = sums[0] / denom;
  out.d1 = sums[1] / denom;
  out.d2 = sums[2] / denom;
  return out;
}

}  // namespace rmstscreen
