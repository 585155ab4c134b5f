// Command-line front end. Talks to the library only through the C API.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rmstscreen/rmstscreen.h"

namespace {

struct Failure {
  int exit_code;
  std::string message;
};

void check(rs_status s) {
  if (s == RS_OK) return;
  throw Failure{rs_is_input_error(s) ? 2 : 1, rs_last_error()};
}

std::string take(char* s) {
  std::string out = s ? s : "";
  rs_string_free(s);
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Failure{1, "cannot open '" + path + "' for writing"};
  f << text;
  if (!f) throw Failure{1, "write to '" + path + "' failed"};
}

// Fills every option the user did not pass on the command line from the
// JSON config file; keys are the long flag names without dashes.
void apply_config(CLI::App* sub, const std::string& path) {
  if (path.empty()) return;
  std::ifstream f(path);
  if (!f) throw Failure{2, "cannot read config file '" + path + "'"};
  nlohmann::json cfg;
  try {
    cfg = nlohmann::json::parse(f);
  } catch (const std::exception& e) {
    throw Failure{2, "config file '" + path + "': " + e.what()};
  }
  if (!cfg.is_object()) throw Failure{2, "config file must hold a JSON object"};
  for (auto it = cfg.begin(); it != cfg.end(); ++it) {
    CLI::Option* opt = nullptr;
    try {
      opt = sub->get_option("--" + it.key());
    } catch (const CLI::OptionNotFound&) {
      throw Failure{2, "unknown key '" + it.key() + "' in config for '" + sub->get_name() + "'"};
    }
    if (it.key() == "config" || opt->count() > 0) continue;
    const auto& v = it.value();
    std::string text;
    if (v.is_string()) text = v.get<std::string>();
    else if (v.is_boolean()) text = v.get<bool>() ? "true" : "false";
    else if (v.is_number()) text = v.dump();
    else throw Failure{2, "config key '" + it.key() + "' must be a scalar"};
    try {
      opt->add_result(text);
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw Failure{2, "config key '" + it.key() + "': " + e.what()};
    }
  }
}

struct Common {
  std::uint64_t seed = 1;
  std::size_t workers = 0;
  std::string config;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "Master random seed");
  sub->add_option("--workers", c.workers, "Worker threads (0 = all hardware threads)");
  sub->add_option("--config", c.config, "JSON file with option values; flags override it");
}

struct ScenarioFlags {
  std::string scenario = "S1";
  std::size_t n = 200;
  std::size_t p = 500;
  std::string error = "normal";
  double censoring = 0.2;
  std::optional<double> rho;
  std::optional<double> c;
};

void add_scenario(CLI::App* sub, ScenarioFlags& s) {
  sub->add_option("--scenario", s.scenario, "S1..S5 or toy-i..toy-vi");
  sub->add_option("--n", s.n, "Sample size");
  sub->add_option("--p", s.p, "Number of covariates");
  sub->add_option("--error", s.error, "Error law: normal, extreme, logistic");
  sub->add_option("--censoring", s.censoring, "Target censoring rate in [0, 1)");
  sub->add_option("--rho", s.rho, "Covariate correlation (default 0.5)");
  sub->add_option("--c", s.c, "Toy-model coefficient (default: 0.5, or 0.1 for toy-iv, 0.3 for toy-v)");
}

rs_scenario_spec to_spec(const ScenarioFlags& s, std::uint64_t seed) {
  rs_scenario_spec spec = rs_scenario_spec_default();
  spec.scenario = s.scenario.c_str();
  spec.n = s.n;
  spec.p = s.p;
  spec.error = s.error.c_str();
  spec.censoring = s.censoring;
  spec.rho = s.rho.value_or(std::nan(""));
  spec.c = s.c.value_or(std::nan(""));
  spec.seed = seed;
  return spec;
}

bool is_toy_name(const std::string& s) { return s.rfind("toy-", 0) == 0 || s.rfind("TOY-", 0) == 0; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feature screening for survival data by stratified RMST discrepancy"};
  app.require_subcommand(1);
  app.set_version_flag("--version", rs_version());

  // screen
  Common screen_common;
  std::string input, time_col = "time", status_col = "status";
  std::string left_col = "left", right_col = "right";
  bool interval = false;
  std::size_t top = 0, min_stratum = 6;
  std::string screen_out = "screen.csv", screen_summary = "screen.json";
  CLI::App* screen = app.add_subcommand("screen", "Rank features of a dataset by RMST discrepancy");
  screen->option_defaults()->always_capture_default();
  screen->add_option("--input", input, "Dataset CSV")->required();
  screen->add_option("--time", time_col, "Observed-time column");
  screen->add_option("--status", status_col, "Event-indicator column (0/1)");
  screen->add_flag("--interval", interval, "Interval-censored input (experimental)");
  screen->add_option("--left", left_col, "Left endpoint column (with --interval)");
  screen->add_option("--right", right_col, "Right endpoint column (with --interval); empty or inf = right-censored");
  screen->add_option("--top", top, "Features to select (0 = floor(n / ln n))");
  screen->add_option("--min-stratum", min_stratum, "Smallest stratum that contributes a term");
  screen->add_option("--output", screen_out, "Ranked-features CSV");
  screen->add_option("--summary", screen_summary, "JSON summary");
  add_common(screen, screen_common);

  // iterate
  Common it_common;
  std::string it_input, it_time = "time", it_status = "status";
  std::size_t q = 0, max_iter = 20, step = 0, it_min_stratum = 6, cvl_grid = 50, cvl_folds = 5;
  std::string it_out = "selected.csv", it_trace = "trace.json";
  CLI::App* iterate = app.add_subcommand("iterate", "Iterative screening with a spline-additive Cox lasso");
  iterate->option_defaults()->always_capture_default();
  iterate->add_option("--input", it_input, "Dataset CSV")->required();
  iterate->add_option("--time", it_time, "Observed-time column");
  iterate->add_option("--status", it_status, "Event-indicator column (0/1)");
  iterate->add_option("--q", q, "Final set size (0 = floor(n / 2))");
  iterate->add_option("--max-iterations", max_iter, "Upper bound on rounds");
  iterate->add_option("--step-size", step, "Features added by each screening step (0 = floor(n / ln n))");
  iterate->add_option("--min-stratum", it_min_stratum, "Smallest stratum that contributes a term");
  iterate->add_option("--cvl-grid", cvl_grid, "Penalty grid size for cross-validation");
  iterate->add_option("--cvl-folds", cvl_folds, "Cross-validation folds");
  iterate->add_option("--output", it_out, "Selected-set CSV");
  iterate->add_option("--trace", it_trace, "Iteration trace JSON");
  add_common(iterate, it_common);

  // simulate
  Common sim_common;
  ScenarioFlags sim_flags;
  bool sim_interval = false;
  std::string sim_out = "simulated.csv", sim_sidecar;
  CLI::App* simulate = app.add_subcommand("simulate", "Generate a dataset from a simulation scenario");
  simulate->option_defaults()->always_capture_default();
  add_scenario(simulate, sim_flags);
  simulate->add_flag("--interval", sim_interval, "Interval-censored draw on a unit inspection grid (experimental)");
  simulate->add_option("--output", sim_out, "Dataset CSV");
  simulate->add_option("--sidecar", sim_sidecar, "JSON sidecar (default: output path with .json)");
  add_common(simulate, sim_common);

  // bench
  Common bench_common;
  ScenarioFlags bench_flags;
  std::string method = "marginal", bench_out;
  std::size_t reps = 50, bench_top = 0, bench_min_stratum = 6, bench_q = 0, bench_max_iter = 20;
  CLI::App* bench = app.add_subcommand("bench", "Replicate a scenario and report Median / IQR / Pall");
  bench->option_defaults()->always_capture_default();
  add_scenario(bench, bench_flags);
  bench->add_option("--reps", reps, "Replications");
  bench->add_option("--method", method, "marginal, iterative, or interval (experimental)");
  bench->add_option("--top", bench_top, "Size at which Pall is taken (0 = floor(n / ln n))");
  bench->add_option("--min-stratum", bench_min_stratum, "Smallest stratum that contributes a term");
  bench->add_option("--q", bench_q, "Final set size for the iterative method (0 = floor(n / 2))");
  bench->add_option("--max-iterations", bench_max_iter, "Round bound for the iterative method");
  bench->add_option("--output", bench_out, "Report JSON (printed to stdout when empty)");
  add_common(bench, bench_common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*screen) {
      apply_config(screen, screen_common.config);
      rs_screen_options o = rs_screen_options_default();
      o.min_stratum_size = min_stratum;
      o.selected_size = top;
      o.workers = screen_common.workers;
      rs_screen_result* r = nullptr;
      if (interval) {
        rs_interval_dataset* ds = nullptr;
        check(rs_interval_dataset_load_csv(input.c_str(), left_col.c_str(), right_col.c_str(), &ds));
        const rs_status s = rs_screen_interval(ds, &o, &r);
        rs_interval_dataset_free(ds);
        check(s);
      } else {
        rs_dataset* ds = nullptr;
        check(rs_dataset_load_csv(input.c_str(), time_col.c_str(), status_col.c_str(), &ds));
        const rs_status s = rs_screen(ds, &o, &r);
        rs_dataset_free(ds);
        check(s);
      }
      char* summary = nullptr;
      rs_status s = rs_screen_result_write_csv(r, screen_out.c_str());
      if (s == RS_OK) s = rs_screen_result_summary_json(r, &summary);
      rs_screen_result_free(r);
      check(s);
      write_file(screen_summary, take(summary));
      std::cout << "wrote " << screen_out << " and " << screen_summary << "\n";
    } else if (*iterate) {
      apply_config(iterate, it_common.config);
      rs_dataset* ds = nullptr;
      check(rs_dataset_load_csv(it_input.c_str(), it_time.c_str(), it_status.c_str(), &ds));
      rs_iterate_options o = rs_iterate_options_default();
      o.q = q;
      o.max_iterations = max_iter;
      o.step_size = step;
      o.min_stratum_size = it_min_stratum;
      o.cvl_grid_size = cvl_grid;
      o.cvl_folds = cvl_folds;
      o.seed = it_common.seed;
      o.workers = it_common.workers;
      rs_iterate_result* r = nullptr;
      const rs_status s0 = rs_iterate(ds, &o, &r);
      rs_dataset_free(ds);
      check(s0);
      char* trace = nullptr;
      rs_status s = rs_iterate_result_write_csv(r, it_out.c_str());
      if (s == RS_OK) s = rs_iterate_result_trace_json(r, &trace);
      const std::size_t rounds = rs_iterate_result_iterations(r);
      rs_iterate_result_free(r);
      check(s);
      write_file(it_trace, take(trace));
      std::cout << "wrote " << it_out << " and " << it_trace << " (" << rounds << " rounds)\n";
    } else if (*simulate) {
      apply_config(simulate, sim_common.config);
      const rs_scenario_spec spec = to_spec(sim_flags, sim_common.seed);
      rs_simulation* sim = nullptr;
      check(sim_interval ? rs_simulate_interval(&spec, &sim) : rs_simulate(&spec, &sim));
      char* sidecar = nullptr;
      rs_status s = rs_simulation_write_csv(sim, sim_out.c_str());
      if (s == RS_OK) s = rs_simulation_sidecar_json(sim, &sidecar);
      rs_simulation_free(sim);
      check(s);
      if (sim_sidecar.empty()) {
        const auto dot = sim_out.rfind('.');
        const auto slash = sim_out.rfind('/');
        const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
        sim_sidecar = (has_ext ? sim_out.substr(0, dot) : sim_out) + ".json";
      }
      write_file(sim_sidecar, take(sidecar));
      std::cout << "wrote " << sim_out << " and " << sim_sidecar << "\n";
    } else if (*bench) {
      apply_config(bench, bench_common.config);
      const rs_scenario_spec spec = to_spec(bench_flags, bench_common.seed);
      std::string json, table;
      if (is_toy_name(bench_flags.scenario)) {
        char* j = nullptr;
        char* t = nullptr;
        check(rs_toy_exceedance(&spec, reps, bench_common.seed, bench_common.workers, nullptr, &j, &t));
        json = take(j);
        table = take(t);
      } else {
        rs_bench_options o = rs_bench_options_default();
        o.method = method.c_str();
        o.reps = reps;
        o.seed = bench_common.seed;
        o.workers = bench_common.workers;
        o.min_stratum_size = bench_min_stratum;
        o.selected_size = bench_top;
        o.q = bench_q;
        o.max_iterations = bench_max_iter;
        rs_bench_report* r = nullptr;
        check(rs_bench(&spec, &o, &r));
        char* j = nullptr;
        char* t = nullptr;
        rs_status s = rs_bench_report_json(r, &j);
        if (s == RS_OK) s = rs_bench_report_table(r, &t);
        rs_bench_report_free(r);
        check(s);
        json = take(j);
        table = take(t);
      }
      std::cout << table;
      if (bench_out.empty()) {
        std::cout << json;
      } else {
        write_file(bench_out, json);
        std::cout << "wrote " << bench_out << "\n";
      }
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
