#include "rmstscreen/rmstscreen.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <string>
#include <variant>

#include "rmstscreen/bench.hpp"
#include "rmstscreen/error.hpp"
#include "rmstscreen/interval.hpp"
#include "rmstscreen/iterative.hpp"
#include "rmstscreen/report.hpp"
#include "rmstscreen/screening.hpp"
#include "rmstscreen/simgen.hpp"
#include "rmstscreen/survdata.hpp"

using namespace rmstscreen;

struct rs_dataset {
  Dataset data;
};

struct rs_interval_dataset {
  IntervalDataset data;
};

struct rs_screen_result {
  ScreeningResult result;
  std::vector<std::string> names;
  std::size_t n = 0;
  std::size_t min_stratum_size = 0;
  bool experimental = false;
};

struct rs_iterate_result {
  IterativeResult result;
  Dataset data;
};

struct rs_simulation {
  ScenarioSpec spec;
  std::variant<GeneratedData, GeneratedIntervalData> draw;
};

struct rs_bench_report {
  BenchmarkReport report;
};

namespace {

thread_local std::string last_error;

rs_status to_status(ErrorCode code) { return static_cast<rs_status>(static_cast<int>(code) + 1); }

template <class F>
rs_status guarded(F&& f) {
  try {
    last_error.clear();
    f();
    return RS_OK;
  } catch (const Error& e) {
    last_error = std::string(error_code_name(e.code())) + ": " + e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return RS_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = std::string("internal error: ") + e.what();
    return RS_ERR_INTERNAL;
  } catch (...) {
    last_error = "internal error";
    return RS_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void copy_indices(const std::vector<std::size_t>& src, size_t* out, size_t capacity, size_t* count) {
  if (count) *count = src.size();
  if (!out) return;
  for (std::size_t k = 0; k < src.size() && k < capacity; ++k) out[k] = src[k];
}

ScreeningConfig screening_config(const rs_screen_options* o) {
  ScreeningConfig c;
  if (!o) return c;
  c.min_stratum_size = o->min_stratum_size;
  if (o->selected_size > 0) c.selected_size = o->selected_size;
  c.workers = o->workers;
  if (c.min_stratum_size < 1) throw Error(ErrorCode::kInvalidArgument, "min_stratum_size must be >= 1");
  return c;
}

ScenarioSpec scenario_spec(const rs_scenario_spec* s) {
  require(s != nullptr && s->scenario != nullptr, "scenario spec missing");
  ScenarioSpec spec;
  spec.scenario = parse_scenario(s->scenario);
  spec.n = s->n;
  spec.p = s->p;
  spec.error = parse_error_dist(s->error ? s->error : "normal");
  spec.target_censoring = s->censoring;
  if (!std::isnan(s->rho)) spec.rho = s->rho;
  if (!std::isnan(s->c)) spec.c = s->c;
  spec.seed = s->seed;
  validate_spec(spec);
  return spec;
}

void write_text(const char* path, const std::string& text) {
  require(path != nullptr, "output path missing");
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIo, std::string("cannot open '") + path + "' for writing");
  f << text;
  if (!f) throw Error(ErrorCode::kIo, std::string("write to '") + path + "' failed");
}

}  // namespace

extern "C" {

const char* rs_version(void) { return "0.1.0"; }

const char* rs_status_name(rs_status status) {
  if (status == RS_OK) return "ok";
  if (status == RS_ERR_INTERNAL) return "internal error";
  if (status > RS_OK && status < RS_ERR_INTERNAL) {
    return error_code_name(static_cast<ErrorCode>(static_cast<int>(status) - 1));
  }
  return "unknown status";
}

int rs_is_input_error(rs_status status) {
  if (status <= RS_OK || status >= RS_ERR_INTERNAL) return 0;
  return is_input_error(static_cast<ErrorCode>(static_cast<int>(status) - 1)) ? 1 : 0;
}

const char* rs_last_error(void) { return last_error.c_str(); }

void rs_string_free(char* s) { delete[] s; }

rs_status rs_dataset_load_csv(const char* path, const char* time_col, const char* status_col,
                              rs_dataset** out) {
  return guarded([&] {
    require(path && time_col && status_col && out, "null argument");
    *out = new rs_dataset{load_right_censored_csv(path, time_col, status_col)};
  });
}

rs_status rs_dataset_from_arrays(const double* covariates_row_major, size_t n, size_t p,
                                 const double* time, const int* status, rs_dataset** out) {
  return guarded([&] {
    require(covariates_row_major && time && status && out, "null argument");
    Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < p; ++j) {
        x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = covariates_row_major[i * p + j];
      }
    }
    *out = new rs_dataset{make_dataset(std::move(x), std::vector<double>(time, time + n),
                                       std::vector<int>(status, status + n))};
  });
}

size_t rs_dataset_rows(const rs_dataset* ds) { return ds ? ds->data.rows() : 0; }
size_t rs_dataset_cols(const rs_dataset* ds) { return ds ? ds->data.cols() : 0; }
void rs_dataset_free(rs_dataset* ds) { delete ds; }

rs_status rs_interval_dataset_load_csv(const char* path, const char* left_col,
                                       const char* right_col, rs_interval_dataset** out) {
  return guarded([&] {
    require(path && left_col && right_col && out, "null argument");
    *out = new rs_interval_dataset{load_interval_censored_csv(path, left_col, right_col)};
  });
}

void rs_interval_dataset_free(rs_interval_dataset* ds) { delete ds; }

rs_screen_options rs_screen_options_default(void) {
  const ScreeningConfig c;
  return {c.min_stratum_size, 0, c.workers};
}

rs_status rs_screen(const rs_dataset* ds, const rs_screen_options* options,
                    rs_screen_result** out) {
  return guarded([&] {
    require(ds && out, "null argument");
    const ScreeningConfig c = screening_config(options);
    *out = new rs_screen_result{screen(ds->data, c), ds->data.feature_names, ds->data.rows(),
                                c.min_stratum_size, false};
  });
}

rs_status rs_screen_interval(const rs_interval_dataset* ds, const rs_screen_options* options,
                             rs_screen_result** out) {
  return guarded([&] {
    require(ds && out, "null argument");
    const ScreeningConfig c = screening_config(options);
    *out = new rs_screen_result{interval_screen(ds->data, c), ds->data.feature_names,
                                ds->data.left.size(), c.min_stratum_size, true};
  });
}

size_t rs_screen_result_size(const rs_screen_result* r) { return r ? r->result.size() : 0; }

rs_status rs_screen_result_stat(const rs_screen_result* r, size_t feature, double* d, double* d1,
                                double* d2) {
  return guarded([&] {
    require(r != nullptr, "null argument");
    require(feature < r->result.size(), "feature index out of range");
    if (d) *d = r->result.d[feature];
    if (d1) *d1 = r->result.d1[feature];
    if (d2) *d2 = r->result.d2[feature];
  });
}

rs_status rs_screen_result_ranking(const rs_screen_result* r, size_t* out, size_t capacity,
                                   size_t* count) {
  return guarded([&] {
    require(r != nullptr, "null argument");
    copy_indices(r->result.ranking, out, capacity, count);
  });
}

rs_status rs_screen_result_selected(const rs_screen_result* r, size_t* out, size_t capacity,
                                    size_t* count) {
  return guarded([&] {
    require(r != nullptr, "null argument");
    copy_indices(r->result.selected, out, capacity, count);
  });
}

rs_status rs_screen_result_write_csv(const rs_screen_result* r, const char* path) {
  return guarded([&] {
    require(r != nullptr, "null argument");
    std::ostringstream s;
    write_screening_csv(s, r->result, r->names);
    write_text(path, s.str());
  });
}

rs_status rs_screen_result_summary_json(const rs_screen_result* r, char** out) {
  return guarded([&] {
    require(r && out, "null argument");
    *out = dup_string(
        screening_summary_json(r->result, r->names, r->n, r->min_stratum_size, r->experimental));
  });
}

void rs_screen_result_free(rs_screen_result* r) { delete r; }

rs_iterate_options rs_iterate_options_default(void) {
  const IterativeConfig c;
  return {0, c.max_iterations, c.screening.min_stratum_size, 0, c.cvl_grid_size, c.cvl_folds,
          c.seed, c.workers};
}

rs_status rs_iterate(const rs_dataset* ds, const rs_iterate_options* options,
                     rs_iterate_result** out) {
  return guarded([&] {
    require(ds && out, "null argument");
    IterativeConfig c;
    if (options) {
      if (options->q > 0) c.q = options->q;
      c.max_iterations = options->max_iterations;
      c.screening.min_stratum_size = options->min_stratum_size;
      if (options->step_size > 0) c.screening.selected_size = options->step_size;
      c.cvl_grid_size = options->cvl_grid_size;
      c.cvl_folds = options->cvl_folds;
      c.seed = options->seed;
      c.workers = options->workers;
    }
    require(c.screening.min_stratum_size >= 1, "min_stratum_size must be >= 1");
    *out = new rs_iterate_result{iterative_screen(ds->data, c), ds->data};
  });
}

rs_status rs_iterate_result_selected(const rs_iterate_result* r, size_t* out, size_t capacity,
                                     size_t* count) {
  return guarded([&] {
    require(r != nullptr, "null argument");
    copy_indices(r->result.selected, out, capacity, count);
  });
}

size_t rs_iterate_result_iterations(const rs_iterate_result* r) {
  return r ? r->result.iterations.size() : 0;
}

rs_status rs_iterate_result_write_csv(const rs_iterate_result* r, const char* path) {
  return guarded([&] {
    require(r != nullptr, "null argument");
    const std::vector<std::size_t> pos = r->result.marginal.rank_positions();
    std::ostringstream s;
    s << "feature,index,marginal_rank\n";
    for (std::size_t j : r->result.selected) {
      s << r->data.feature_names[j] << ',' << j + 1 << ',' << pos[j] << '\n';
    }
    write_text(path, s.str());
  });
}

rs_status rs_iterate_result_trace_json(const rs_iterate_result* r, char** out) {
  return guarded([&] {
    require(r && out, "null argument");
    *out = dup_string(iterative_trace_json(r->result, r->data));
  });
}

void rs_iterate_result_free(rs_iterate_result* r) { delete r; }

rs_scenario_spec rs_scenario_spec_default(void) {
  const ScenarioSpec s;
  return {"S1", s.n, s.p, "normal", s.target_censoring, std::nan(""), std::nan(""), s.seed};
}

rs_status rs_simulate(const rs_scenario_spec* spec, rs_simulation** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    const ScenarioSpec s = scenario_spec(spec);
    *out = new rs_simulation{s, generate(s)};
  });
}

rs_status rs_simulate_interval(const rs_scenario_spec* spec, rs_simulation** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    const ScenarioSpec s = scenario_spec(spec);
    *out = new rs_simulation{s, gen_interval_data(s)};
  });
}

rs_status rs_simulation_write_csv(const rs_simulation* sim, const char* path) {
  return guarded([&] {
    require(sim != nullptr, "null argument");
    std::ostringstream s;
    if (const auto* g = std::get_if<GeneratedData>(&sim->draw)) {
      write_csv(s, g->data);
    } else {
      write_csv(s, std::get<GeneratedIntervalData>(sim->draw).data);
    }
    write_text(path, s.str());
  });
}

rs_status rs_simulation_sidecar_json(const rs_simulation* sim, char** out) {
  return guarded([&] {
    require(sim && out, "null argument");
    if (const auto* g = std::get_if<GeneratedData>(&sim->draw)) {
      *out = dup_string(simulation_sidecar_json(sim->spec, *g));
    } else {
      *out = dup_string(interval_sidecar_json(sim->spec, std::get<GeneratedIntervalData>(sim->draw)));
    }
  });
}

void rs_simulation_free(rs_simulation* sim) { delete sim; }

rs_bench_options rs_bench_options_default(void) {
  const BenchConfig c;
  return {"marginal", c.reps, c.seed, c.workers, c.screening.min_stratum_size, 0, 0,
          c.iterative.max_iterations};
}

rs_status rs_bench(const rs_scenario_spec* spec, const rs_bench_options* options,
                   rs_bench_report** out) {
  return guarded([&] {
    require(out && options, "null argument");
    const ScenarioSpec s = scenario_spec(spec);
    BenchConfig c;
    c.method = parse_method(options->method ? options->method : "marginal");
    c.reps = options->reps;
    c.seed = options->seed;
    c.workers = options->workers;
    c.screening.min_stratum_size = options->min_stratum_size;
    require(c.screening.min_stratum_size >= 1, "min_stratum_size must be >= 1");
    if (options->selected_size > 0) c.screening.selected_size = options->selected_size;
    if (options->q > 0) c.iterative.q = options->q;
    c.iterative.max_iterations = options->max_iterations;
    *out = new rs_bench_report{run_replications(s, c)};
  });
}

double rs_bench_report_p_all(const rs_bench_report* r) { return r ? r->report.p_all : std::nan(""); }

double rs_bench_report_median(const rs_bench_report* r) {
  return r && r->report.median_mms ? *r->report.median_mms : std::nan("");
}

double rs_bench_report_iqr(const rs_bench_report* r) {
  return r && r->report.iqr_mms ? *r->report.iqr_mms : std::nan("");
}

rs_status rs_bench_report_json(const rs_bench_report* r, char** out) {
  return guarded([&] {
    require(r && out, "null argument");
    *out = dup_string(bench_report_json(r->report));
  });
}

rs_status rs_bench_report_table(const rs_bench_report* r, char** out) {
  return guarded([&] {
    require(r && out, "null argument");
    *out = dup_string(bench_report_table(r->report));
  });
}

void rs_bench_report_free(rs_bench_report* r) { delete r; }

rs_status rs_toy_exceedance(const rs_scenario_spec* spec, size_t reps, uint64_t seed,
                            size_t workers, rs_exceedance* out, char** json, char** table) {
  return guarded([&] {
    require(spec != nullptr && spec->scenario != nullptr, "scenario spec missing");
    const Scenario model = parse_scenario(spec->scenario);
    std::optional<double> c;
    if (!std::isnan(spec->c)) c = spec->c;
    const ExceedanceResult r =
        toy_exceedance(model, c, reps, seed, spec->n, spec->censoring, workers);
    if (out) *out = {r.d, r.d1, r.d2, r.c, r.reps};
    if (json) *json = dup_string(exceedance_json(r));
    if (table) *table = dup_string(exceedance_table(r));
  });
}

}  // extern "C"
