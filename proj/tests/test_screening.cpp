#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "rmstscreen/coxgam.hpp"
#include "rmstscreen/random.hpp"
#include "rmstscreen/screening.hpp"
#include "rmstscreen/simgen.hpp"

using namespace rmstscreen;

namespace {

Dataset random_dataset(std::uint64_t seed, std::size_t n, std::size_t p, double censor = 0.3) {
  Rng rng(seed);
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = 0; i < x.rows(); ++i) x(i, j) = std::round(rng.normal() * 4.0) / 4.0;
  std::vector<double> t(n);
  std::vector<int> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = std::round(std::exp(0.8 * x(static_cast<Eigen::Index>(i), 0) + rng.normal()) * 8.0) / 8.0;
    s[i] = rng.uniform() < censor ? 0 : 1;
  }
  s[0] = 1;
  return make_dataset(x, t, s);
}

ScreeningConfig with_min(std::size_t m, std::size_t workers = 1) {
  ScreeningConfig c;
  c.min_stratum_size = m;
  c.workers = workers;
  return c;
}

}  // namespace

TEST_CASE("[property] discrepancy matches a term-by-term evaluation") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const Dataset d = random_dataset(seed, 25 + 5 * seed, 3);
    for (std::size_t m : {std::size_t{1}, std::size_t{6}}) {
      for (std::size_t j = 0; j < d.cols(); ++j) {
        std::vector<double> x(d.rows());
        for (std::size_t i = 0; i < d.rows(); ++i) x[i] = d.covariates(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        const auto ref = oracle::discrepancy(d.time, d.status, x, m);
        const auto got = rmst_discrepancy(d, j, with_min(m));
        CHECK(std::abs(got.d1 - ref.d1) < 1e-12);
        CHECK(std::abs(got.d2 - ref.d2) < 1e-12);
      }
    }
  }
}

TEST_CASE("[property] constant covariate gives zero") {
  const Dataset base = random_dataset(3, 40, 1);
  Eigen::MatrixXd x = Eigen::MatrixXd::Constant(40, 1, 2.5);
  const Dataset d = make_dataset(x, base.time, base.status);
  const auto r = rmst_discrepancy(d, 0, with_min(1));
  CHECK(r.d == 0.0);
  CHECK(r.d1 == 0.0);
  CHECK(r.d2 == 0.0);
  // Every lower stratum is empty.
  CHECK(r.skipped_terms == 40);
}

TEST_CASE("censored and uncensored forms agree on an uncensored instance") {
  // The two tied maxima sit at the smallest and largest X, so every
  // nonempty stratum contains the overall largest time and every
  // restriction time equals it.
  const std::vector<double> x{1, 2, 3, 4, 5, 6, 7, 8};
  const std::vector<double> t{9, 4, 7, 2, 5, 1, 6, 9};
  const std::vector<int> s(8, 1);
  Eigen::MatrixXd xm(8, 1);
  for (int i = 0; i < 8; ++i) xm(i, 0) = x[static_cast<std::size_t>(i)];
  const Dataset d = make_dataset(xm, t, s);
  const auto cens = rmst_discrepancy(d, 0, with_min(1));
  const auto unc = uncensored_discrepancy(t, x, with_min(1));
  CHECK(std::abs(cens.d - unc.d) < 1e-10);
  CHECK(std::abs(cens.d1 - unc.d1) < 1e-10);
  CHECK(std::abs(cens.d2 - unc.d2) < 1e-10);
  CHECK(cens.d > 0.0);
}

TEST_CASE("uncensored hand example") {
  const std::vector<double> y{1, 2, 3};
  const std::vector<double> x{1, 2, 3};
  const auto r = uncensored_discrepancy(y, x, with_min(1));
  CHECK(std::abs(r.d1 - 0.5) < 1e-15);
  CHECK(std::abs(r.d2 - 0.5) < 1e-15);
  CHECK(std::abs(r.d - 1.0) < 1e-15);

  const std::vector<double> yc{2, 2, 2};
  CHECK(uncensored_discrepancy(yc, x, with_min(1)).d == 0.0);
  const std::vector<double> xc{4, 4, 4};
  CHECK(uncensored_discrepancy(y, xc, with_min(1)).d == 0.0);

  const std::vector<double> shorter{1, 2};
  CHECK_THROWS(uncensored_discrepancy(shorter, x, with_min(1)));
}

TEST_CASE("[property] monotone transforms leave statistics and ranks unchanged") {
  Dataset d = random_dataset(9, 80, 5);
  // Shift to positive values so the cube is strictly increasing on the data.
  for (Eigen::Index i = 0; i < d.covariates.rows(); ++i)
    for (Eigen::Index j = 0; j < d.covariates.cols(); ++j) d.covariates(i, j) += 10.0;
  const ScreeningResult base = screen(d, with_min(6));
  auto transforms = std::vector<double (*)(double)>{
      [](double v) { return std::exp(v); }, [](double v) { return 2.0 * v + 7.0; },
      [](double v) { return v * v * v; }};
  for (auto g : transforms) {
    for (std::size_t j = 0; j < d.cols(); ++j) {
      Dataset e = d;
      for (Eigen::Index i = 0; i < e.covariates.rows(); ++i)
        e.covariates(i, static_cast<Eigen::Index>(j)) = g(e.covariates(i, static_cast<Eigen::Index>(j)));
      const ScreeningResult r = screen(e, with_min(6));
      CHECK(r.d == base.d);
      CHECK(r.d1 == base.d1);
      CHECK(r.d2 == base.d2);
      CHECK(r.ranking == base.ranking);
    }
  }
}

TEST_CASE("[property] d is the sum of its halves and never negative") {
  for (std::uint64_t seed = 20; seed < 25; ++seed) {
    const Dataset d = random_dataset(seed, 60, 8);
    const ScreeningResult r = screen(d, with_min(6));
    for (std::size_t j = 0; j < r.size(); ++j) {
      CHECK(std::abs(r.d[j] - (r.d1[j] + r.d2[j])) <= 1e-12);
      CHECK(r.d[j] >= 0.0);
      CHECK(r.d1[j] >= 0.0);
      CHECK(r.d2[j] >= 0.0);
    }
  }
}

TEST_CASE("single feature is ranked and selected") {
  const Dataset d = random_dataset(2, 30, 1);
  const ScreeningResult r = screen(d);
  CHECK(r.ranking == std::vector<std::size_t>{0});
  CHECK(r.selected == std::vector<std::size_t>{0});
}

TEST_CASE("duplicate columns tie exactly and the lower index wins") {
  Dataset d = random_dataset(4, 50, 4);
  d.covariates.col(3) = d.covariates.col(1);
  const ScreeningResult r = screen(d, with_min(6));
  CHECK(r.d[1] == r.d[3]);
  const auto pos = r.rank_positions();
  CHECK(pos[1] + 1 == pos[3]);
}

TEST_CASE("default selected size is floor(n / ln n)") {
  CHECK(n_over_log_n(200) == 37);
  CHECK(n_over_log_n(100) == 21);
  const Dataset d = random_dataset(6, 200, 50);
  CHECK(screen(d).selected.size() == 37);
  ScreeningConfig big;
  big.selected_size = 51;
  CHECK_THROWS(screen(d, big));
}

TEST_CASE("[property] worker count does not change results") {
  const Dataset d = random_dataset(8, 120, 40);
  const ScreeningResult a = screen(d, with_min(6, 1));
  const ScreeningResult b = screen(d, with_min(6, 4));
  CHECK(a.d == b.d);
  CHECK(a.d1 == b.d1);
  CHECK(a.d2 == b.d2);
  CHECK(a.ranking == b.ranking);
  CHECK(a.skipped_term_counts == b.skipped_term_counts);
}

TEST_CASE("uncensored screening honours the exclusion set") {
  const Dataset d = random_dataset(10, 60, 5);
  std::vector<double> y(d.time.begin(), d.time.end());
  const ScreeningResult none = screen_uncensored(y, d.covariates, {0, 1, 2, 3, 4}, with_min(6));
  CHECK(none.selected.empty());
  const ScreeningResult one = screen_uncensored(y, d.covariates, {0, 1, 3, 4}, with_min(6));
  CHECK(std::find(one.selected.begin(), one.selected.end(), 2) != one.selected.end());
  CHECK(one.ranking.front() == 2);
}

TEST_CASE("null residual screening has no dominant feature") {
  // Deviance residuals of the null Cox model against independent noise.
  std::size_t calm = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    Rng rng(seed, 77);
    const std::size_t n = 100, p = 50;
    Eigen::MatrixXd x(n, p);
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      for (Eigen::Index i = 0; i < x.rows(); ++i) x(i, j) = rng.normal();
    std::vector<double> t(n);
    std::vector<int> s(n);
    for (std::size_t i = 0; i < n; ++i) {
      t[i] = -std::log(rng.uniform());
      s[i] = rng.uniform() < 0.8 ? 1 : 0;
    }
    s[0] = 1;
    const Eigen::VectorXd eta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    const auto dev = deviance_residuals(eta, breslow_baseline(eta, t, s), t, s);
    const ScreeningResult r = screen_uncensored(dev, x, {}, with_min(6));
    const double med = oracle::median(r.d);
    if (*std::max_element(r.d.begin(), r.d.end()) <= 3.0 * med) ++calm;
  }
  CHECK(calm >= 90);
}

TEST_CASE("an active feature beats an inactive one in scenario 1") {
  std::size_t wins = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    ScenarioSpec spec;
    spec.scenario = Scenario::kS1;
    spec.n = 200;
    spec.p = 10;
    spec.seed = seed;
    const GeneratedData g = generate(spec);
    const auto a = rmst_discrepancy(g.data, 0);
    const auto b = rmst_discrepancy(g.data, 4);
    if (a.d > b.d) ++wins;
  }
  CHECK(wins >= 95);
}

TEST_CASE("ranking consistency in scenario 1") {
  std::size_t separated = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    ScenarioSpec spec;
    spec.scenario = Scenario::kS1;
    spec.n = 200;
    spec.p = 500;
    spec.seed = seed;
    const GeneratedData g = generate(spec);
    const ScreeningResult r = screen(g.data, with_min(6, 0));
    double min_active = INFINITY, max_inactive = -INFINITY;
    for (std::size_t j = 0; j < r.size(); ++j) {
      const bool active = std::find(g.active_set.begin(), g.active_set.end(), j) != g.active_set.end();
      if (active) min_active = std::min(min_active, r.d[j]);
      else max_inactive = std::max(max_inactive, r.d[j]);
    }
    if (min_active > max_inactive) ++separated;
  }
  CHECK(separated >= 95);
}

TEST_CASE("[property] null statistic shrinks at the root-n rate") {
  // X independent of (Y, Delta): toy model (vi) with c = 0, column 0.
  auto median_d = [](std::size_t n) {
    std::vector<double> ds;
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
      ScenarioSpec spec;
      spec.scenario = Scenario::kToyVI;
      spec.n = n;
      spec.p = 2;
      spec.c = 0.0;
      spec.seed = seed;
      const GeneratedData g = generate(spec);
      ds.push_back(rmst_discrepancy(g.data, 0).d);
    }
    return oracle::median(ds);
  };
  const double ratio = median_d(100) / median_d(400);
  CHECK(ratio >= 1.6);
  CHECK(ratio <= 2.6);
}

TEST_CASE("skipped terms are counted") {
  const Dataset d = random_dataset(12, 30, 1);
  const auto r1 = rmst_discrepancy(d, 0, with_min(1));
  const auto r6 = rmst_discrepancy(d, 0, with_min(6));
  CHECK(r6.skipped_terms > r1.skipped_terms);
  CHECK_THROWS(rmst_discrepancy(d, 1));
}
