#include "rmstscreen/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "rmstscreen/survdata.hpp"

namespace rmstscreen {
namespace {

using Json = nlohmann::ordered_json;

Json names_of(const std::vector<std::size_t>& idx, const std::vector<std::string>& names) {
  Json a = Json::array();
  for (std::size_t j : idx) a.push_back(names[j]);
  return a;
}

Json one_based(const std::vector<std::size_t>& idx) {
  Json a = Json::array();
  for (std::size_t j : idx) a.push_back(j + 1);
  return a;
}

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json spec_object(const ScenarioSpec& spec) {
  Json j;
  j["scenario"] = scenario_name(spec.scenario);
  j["n"] = spec.n;
  j["p"] = spec.p;
  j["error"] = is_toy(spec.scenario) ? "normal(0, 0.6^2)" : error_dist_name(spec.error);
  j["target_censoring"] = spec.target_censoring;
  j["rho"] = default_rho(spec);
  if (is_toy(spec.scenario)) j["c"] = spec.c.value_or(default_c(spec.scenario));
  j["seed"] = spec.seed;
  return j;
}

}  // namespace

void write_screening_csv(std::ostream& out, const ScreeningResult& result,
                         const std::vector<std::string>& names) {
  const std::vector<std::size_t> pos = result.rank_positions();
  std::vector<bool> chosen(result.size(), false);
  for (std::size_t j : result.selected) chosen[j] = true;
  out << "feature,d,d1,d2,rank,selected\n";
  for (std::size_t j : result.ranking) {
    out << names[j] << ',' << format_double(result.d[j]) << ',' << format_double(result.d1[j])
        << ',' << format_double(result.d2[j]) << ',' << pos[j] << ',' << (chosen[j] ? 1 : 0)
        << '\n';
  }
}

std::string screening_summary_json(const ScreeningResult& result,
                                   const std::vector<std::string>& names, std::size_t n,
                                   std::size_t min_stratum_size, bool experimental) {
  Json j;
  if (experimental) j["experimental"] = true;
  j["n"] = n;
  j["p"] = result.size();
  j["min_stratum_size"] = min_stratum_size;
  j["selected_size"] = result.selected.size();
  j["selected"] = names_of(result.selected, names);
  Json top = Json::array();
  for (std::size_t k = 0; k < result.ranking.size() && k < 10; ++k) {
    const std::size_t f = result.ranking[k];
    top.push_back({{"feature", names[f]}, {"d", finite_or_null(result.d[f])}});
  }
  j["top"] = top;
  std::size_t skipped = 0;
  for (std::size_t s : result.skipped_term_counts) skipped += s;
  j["skipped_terms_total"] = skipped;
  return j.dump(2) + "\n";
}

std::string iterative_trace_json(const IterativeResult& result, const Dataset& data) {
  const auto& names = data.feature_names;
  Json j;
  j["n"] = data.rows();
  j["p"] = data.cols();
  j["q"] = result.q;
  j["initial"] = names_of(result.initial, names);
  Json iters = Json::array();
  for (std::size_t k = 0; k < result.iterations.size(); ++k) {
    const IterationRecord& rec = result.iterations[k];
    Json r;
    r["iteration"] = k + 1;
    r["candidates"] = names_of(rec.candidates, names);
    r["lasso_selected"] = names_of(rec.lasso_selected, names);
    r["residual_selected"] = names_of(rec.residual_selected, names);
    r["union"] = names_of(rec.updated, names);
    r["theta"] = rec.theta;
    r["lasso_converged"] = rec.lasso_converged;
    r["refit_converged"] = rec.refit_converged;
    r["residual_model"] = rec.residual_model;
    iters.push_back(r);
  }
  j["iterations"] = iters;
  j["stop_reason"] = result.stop_reason;
  j["fallback"] = result.fallback;
  j["truncated"] = result.truncated;
  j["selected"] = names_of(result.selected, names);
  return j.dump(2) + "\n";
}

std::string spec_json(const ScenarioSpec& spec) { return spec_object(spec).dump(2) + "\n"; }

std::string simulation_sidecar_json(const ScenarioSpec& spec, const GeneratedData& g) {
  Json j;
  j["spec"] = spec_object(spec);
  j["active_set"] = one_based(g.active_set);
  j["u"] = finite_or_null(g.u);
  j["censoring_rate"] = g.censoring_rate;
  return j.dump(2) + "\n";
}

std::string interval_sidecar_json(const ScenarioSpec& spec, const GeneratedIntervalData& g) {
  Json j;
  j["experimental"] = true;
  j["spec"] = spec_object(spec);
  j["active_set"] = one_based(g.active_set);
  j["horizon"] = finite_or_null(g.horizon);
  j["right_censored_share"] = g.right_censored_share;
  return j.dump(2) + "\n";
}

std::string bench_report_json(const BenchmarkReport& report) {
  Json j;
  j["method"] = method_name(report.method);
  if (report.method == Method::kInterval) j["experimental"] = true;
  j["spec"] = spec_object(report.spec);
  j["spec"].erase("seed");
  j["seed"] = report.seed;
  j["reps"] = report.reps;
  j["active_set"] = one_based(active_set(report.spec.scenario));
  j["selected_size"] = report.selected_size;
  j["per_rep_mms"] = report.per_rep_mms;
  j["per_rep_all"] = report.per_rep_all;
  j["median_mms"] = report.median_mms ? Json(*report.median_mms) : Json(nullptr);
  j["iqr_mms"] = report.iqr_mms ? Json(*report.iqr_mms) : Json(nullptr);
  j["p_all"] = report.p_all;
  double mean_cens = 0.0;
  for (double c : report.per_rep_censoring) mean_cens += c;
  j["mean_censoring"] = mean_cens / static_cast<double>(std::max<std::size_t>(report.reps, 1));
  return j.dump(2) + "\n";
}

std::string bench_report_table(const BenchmarkReport& report) {
  auto fmt = [](const std::optional<double>& v) {
    if (!v) return std::string("-");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", *v);
    return std::string(buf);
  };
  char line[256];
  std::ostringstream out;
  std::snprintf(line, sizeof line, "%-9s %-9s %5s %5s %6s %-10s %8s %6s %6s\n", "Scenario", "Error",
                "n", "p", "CR", "Method", "Median", "IQR", "Pall");
  out << line;
  std::snprintf(line, sizeof line, "%-9s %-9s %5zu %5zu %5.0f%% %-10s %8s %6s %5.0f%%\n",
                scenario_name(report.spec.scenario).c_str(),
                error_dist_name(report.spec.error).c_str(), report.spec.n, report.spec.p,
                100.0 * report.spec.target_censoring, method_name(report.method).c_str(),
                fmt(report.median_mms).c_str(), fmt(report.iqr_mms).c_str(), 100.0 * report.p_all);
  out << line;
  return out.str();
}

std::string exceedance_json(const ExceedanceResult& result) {
  Json j;
  j["model"] = scenario_name(result.model);
  j["c"] = result.c;
  j["reps"] = result.reps;
  j["exceedance"] = {{"d", result.d}, {"d1", result.d1}, {"d2", result.d2}};
  return j.dump(2) + "\n";
}

std::string exceedance_table(const ExceedanceResult& result) {
  char line[128];
  std::ostringstream out;
  std::snprintf(line, sizeof line, "%-8s %6s %5s %6s %6s %6s\n", "Model", "c", "reps", "d", "d1", "d2");
  out << line;
  std::snprintf(line, sizeof line, "%-8s %6.2f %5zu %5.0f%% %5.0f%% %5.0f%%\n",
                scenario_name(result.model).c_str(), result.c, result.reps, 100.0 * result.d,
                100.0 * result.d1, 100.0 * result.d2);
  out << line;
  return out.str();
}

}  // namespace rmstscreen
