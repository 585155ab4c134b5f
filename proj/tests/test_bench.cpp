#include <algorithm>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "rmstscreen/bench.hpp"
#include "rmstscreen/error.hpp"
#include "rmstscreen/quantile.hpp"
#include "rmstscreen/report.hpp"

using namespace rmstscreen;

TEST_CASE("minimum model size") {
  const std::vector<std::size_t> ranking{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  CHECK(min_model_size(ranking, std::vector<std::size_t>{0, 1, 2, 3}) == 4);
  CHECK(min_model_size(ranking, std::vector<std::size_t>{9}) == 10);
  const std::vector<std::size_t> shuffled{4, 2, 8, 5, 0, 9, 7, 1, 3, 6};
  // Active features at positions 2, 7 and 4 (1-based).
  CHECK(min_model_size(shuffled, std::vector<std::size_t>{2, 1, 5}) == 8);
  CHECK_THROWS_AS(min_model_size(ranking, std::vector<std::size_t>{}), Error);
}

TEST_CASE("type-7 quantiles") {
  const std::vector<double> v{4, 1, 3, 2};
  CHECK(quantile_type7(v, 0.25) == doctest::Approx(1.75));
  CHECK(quantile_type7(v, 0.5) == doctest::Approx(2.5));
  CHECK(quantile_type7(v, 0.75) == doctest::Approx(3.25));
  CHECK(quantile_type7(v, 1.0) == 4.0);
}

namespace {

ScenarioSpec s1(std::size_t p) {
  ScenarioSpec spec;
  spec.n = 100;
  spec.p = p;
  return spec;
}

}  // namespace

TEST_CASE("replication summaries are consistent with the per-replication values") {
  BenchConfig c;
  c.reps = 12;
  c.workers = 2;
  const BenchmarkReport r = run_replications(s1(60), c);
  REQUIRE(r.per_rep_mms.size() == 12);
  std::size_t hits = 0;
  for (std::size_t k = 0; k < 12; ++k) {
    CHECK(r.per_rep_mms[k] >= 4);
    CHECK(r.per_rep_mms[k] <= 60);
    CHECK(r.per_rep_all[k] == (r.per_rep_mms[k] <= r.selected_size));
    hits += r.per_rep_all[k];
  }
  CHECK(r.selected_size == 21);
  CHECK(r.p_all == doctest::Approx(static_cast<double>(hits) / 12.0));
  std::vector<double> m(r.per_rep_mms.begin(), r.per_rep_mms.end());
  CHECK(*r.median_mms == doctest::Approx(quantile_type7(m, 0.5)));
  CHECK(*r.iqr_mms == doctest::Approx(quantile_type7(m, 0.75) - quantile_type7(m, 0.25)));
  // P_all at a fixed size cannot fall as the size grows.
  double prev = 0;
  for (std::size_t s = 1; s <= 60; ++s) {
    const double share = static_cast<double>(std::count_if(
        r.per_rep_mms.begin(), r.per_rep_mms.end(), [&](std::size_t v) { return v <= s; })) / 12.0;
    CHECK(share >= prev);
    prev = share;
  }
}

TEST_CASE("[property] bench output is identical for one and many workers") {
  BenchConfig c;
  c.reps = 6;
  c.workers = 1;
  const BenchmarkReport a = run_replications(s1(40), c);
  c.workers = 4;
  const BenchmarkReport b = run_replications(s1(40), c);
  CHECK(a.per_rep_mms == b.per_rep_mms);
  CHECK(a.per_rep_censoring == b.per_rep_censoring);
  CHECK(bench_report_json(a) == bench_report_json(b));
}

TEST_CASE("a failing replication aborts the run") {
  BenchConfig c;
  c.reps = 3;
  c.method = Method::kIterative;
  ScenarioSpec spec = s1(20);
  spec.n = 15;
  CHECK_THROWS_AS(run_replications(spec, c), Error);
}

TEST_CASE("bench report json fields") {
  BenchConfig c;
  c.reps = 3;
  const BenchmarkReport r = run_replications(s1(30), c);
  const auto j = nlohmann::json::parse(bench_report_json(r));
  CHECK(j.contains("median_mms"));
  CHECK(j.contains("iqr_mms"));
  CHECK(j.contains("p_all"));
  CHECK(j["reps"] == 3);
  CHECK(j["per_rep_mms"].size() == 3);
  const std::string table = bench_report_table(r);
  CHECK(table.find("Median") != std::string::npos);
  CHECK(table.find("Pall") != std::string::npos);
}

TEST_CASE("method names") {
  CHECK(parse_method("marginal") == Method::kMarginal);
  CHECK(parse_method("iterative") == Method::kIterative);
  CHECK(parse_method("interval") == Method::kInterval);
  CHECK_THROWS_AS(parse_method("lasso"), Error);
}

TEST_CASE("toy exceedance: a null signal wins about half the time") {
  const ExceedanceResult r = toy_exceedance(Scenario::kToyI, 0.0, 100, 3);
  CHECK(r.d >= 0.35);
  CHECK(r.d <= 0.65);
  CHECK_THROWS_AS(toy_exceedance(Scenario::kS1, std::nullopt, 10, 1), Error);
}
