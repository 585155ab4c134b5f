#include <algorithm>
#include <set>
#include <vector>

#include "doctest.h"
#include "rmstscreen/error.hpp"
#include "rmstscreen/iterative.hpp"
#include "rmstscreen/simgen.hpp"

using namespace rmstscreen;

namespace {

Dataset small_s5(std::uint64_t seed, std::size_t n = 60, std::size_t p = 40) {
  ScenarioSpec spec;
  spec.scenario = Scenario::kS5;
  spec.n = n;
  spec.p = p;
  spec.seed = seed;
  return generate(spec).data;
}

IterativeConfig quick(std::size_t workers = 1) {
  IterativeConfig c;
  c.cvl_grid_size = 20;
  c.workers = workers;
  return c;
}

bool same(const IterativeResult& a, const IterativeResult& b) {
  if (a.selected != b.selected || a.iterations.size() != b.iterations.size()) return false;
  for (std::size_t k = 0; k < a.iterations.size(); ++k) {
    const auto& x = a.iterations[k];
    const auto& y = b.iterations[k];
    if (x.lasso_selected != y.lasso_selected || x.residual_selected != y.residual_selected ||
        x.updated != y.updated || x.theta != y.theta)
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("iteration stops once the selected size is reached or nothing changes") {
  const Dataset d = small_s5(1, 60, 10);
  IterativeConfig c = quick();
  c.q = 10;
  const IterativeResult r = iterative_screen(d, c);
  CHECK_FALSE(r.iterations.empty());
  CHECK(r.selected.size() <= 10);
  for (std::size_t j : r.selected) CHECK(j < 10);
  CHECK((r.stop_reason == "reached q" || r.stop_reason == "unchanged" || r.stop_reason == "fallback"));
  if (r.stop_reason == "unchanged") {
    REQUIRE(r.iterations.size() >= 1);
    CHECK(r.iterations.back().updated == r.iterations.back().candidates);
  }
}

TEST_CASE("one iteration cap gives a one-round trace") {
  IterativeConfig c = quick();
  c.max_iterations = 1;
  const IterativeResult r = iterative_screen(small_s5(2), c);
  CHECK(r.iterations.size() == 1);
}

TEST_CASE("every selected feature came from the lasso or the residual screen") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const IterativeResult r = iterative_screen(small_s5(seed), quick());
    std::set<std::size_t> seen(r.initial.begin(), r.initial.end());
    for (const auto& it : r.iterations) {
      seen.insert(it.lasso_selected.begin(), it.lasso_selected.end());
      seen.insert(it.residual_selected.begin(), it.residual_selected.end());
      for (std::size_t j : it.residual_selected)
        CHECK(std::find(it.lasso_selected.begin(), it.lasso_selected.end(), j) == it.lasso_selected.end());
    }
    for (std::size_t j : r.selected) CHECK(seen.count(j) == 1);
    CHECK(r.selected.size() <= r.q);
    CHECK(std::is_sorted(r.selected.begin(), r.selected.end()));
  }
}

TEST_CASE("[property] iterative screening is deterministic across runs and worker counts") {
  const Dataset d = small_s5(4);
  const IterativeResult a = iterative_screen(d, quick(1));
  const IterativeResult b = iterative_screen(d, quick(1));
  const IterativeResult c = iterative_screen(d, quick(3));
  CHECK(same(a, b));
  CHECK(same(a, c));
  CHECK(iterative_trace_json(a, d) == iterative_trace_json(c, d));
}

TEST_CASE("argument checks") {
  const Dataset d = small_s5(5, 60, 12);
  IterativeConfig c = quick();
  c.q = 13;
  try {
    iterative_screen(d, c);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidArgument);
  }
  const Dataset tiny = small_s5(5, 15, 12);
  CHECK_THROWS_AS(iterative_screen(tiny, quick()), Error);
}

TEST_CASE("an empty lasso set falls back to the marginal screen") {
  // Pure noise often leaves the cross-validated lasso empty.
  bool saw = false;
  for (std::uint64_t seed = 1; seed <= 30 && !saw; ++seed) {
    ScenarioSpec spec;
    spec.scenario = Scenario::kToyVI;
    spec.c = 0.0;
    spec.n = 60;
    spec.p = 30;
    spec.seed = seed;
    const Dataset d = generate(spec).data;
    const IterativeResult r = iterative_screen(d, quick());
    if (!r.fallback) continue;
    saw = true;
    CHECK(r.stop_reason == "fallback");
    std::vector<std::size_t> expect(r.initial.begin(),
                                     r.initial.begin() + static_cast<std::ptrdiff_t>(std::min(r.q, r.initial.size())));
    std::sort(expect.begin(), expect.end());
    CHECK(r.selected == expect);
  }
  CHECK(saw);
}

TEST_CASE("default final size is n / 2") {
  const IterativeResult r = iterative_screen(small_s5(6), quick());
  CHECK(r.q == 30);
  CHECK(r.initial.size() == 14);  // floor(60 / ln 60)
}
