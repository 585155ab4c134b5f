#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "rmstscreen/error.hpp"
#include "rmstscreen/survdata.hpp"

using namespace rmstscreen;

namespace {

std::string temp_csv(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / ("rmstscreen_" + name + ".csv");
  std::ofstream(path) << body;
  return path.string();
}

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::kInvalidArgument;
}

}  // namespace

TEST_CASE("right-censored csv loads in file order") {
  const auto path = temp_csv("rc_ok", "time,status,x1\n1.0,1,0.5\n2.0,0,0.7\n3.0,1,0.1\n");
  const Dataset d = load_right_censored_csv(path, "time", "status");
  CHECK(d.rows() == 3);
  CHECK(d.cols() == 1);
  CHECK(d.time == std::vector<double>{1.0, 2.0, 3.0});
  CHECK(d.status == std::vector<int>{1, 0, 1});
  CHECK(d.covariates(1, 0) == 0.7);
  CHECK(d.feature_names == std::vector<std::string>{"x1"});
}

TEST_CASE("covariate columns keep file order around the response columns") {
  const auto path = temp_csv("rc_order", "b,time,a,status,c\n1,1,2,1,3\n4,2,5,0,6\n");
  const Dataset d = load_right_censored_csv(path, "time", "status");
  CHECK(d.feature_names == std::vector<std::string>{"b", "a", "c"});
  CHECK(d.covariates(1, 2) == 6.0);
}

TEST_CASE("invalid status value") {
  const auto path = temp_csv("rc_status", "time,status,x1\n1.0,2,0.5\n2.0,1,0.7\n");
  CHECK(code_of([&] { load_right_censored_csv(path, "time", "status"); }) ==
        ErrorCode::kInvalidStatus);
  CHECK(std::string(error_code_name(ErrorCode::kInvalidStatus)) == "invalid status value");
}

TEST_CASE("all censored is rejected") {
  const auto path = temp_csv("rc_noev", "time,status,x1\n1.0,0,0.5\n2.0,0,0.7\n");
  CHECK(code_of([&] { load_right_censored_csv(path, "time", "status"); }) == ErrorCode::kNoEvents);
}

TEST_CASE("ingestion errors carry distinct codes") {
  CHECK(code_of([] { load_right_censored_csv("/nonexistent/file.csv", "time", "status"); }) ==
        ErrorCode::kMissingFile);
  const auto nocol = temp_csv("rc_nocol", "time,x1\n1.0,0.5\n");
  CHECK(code_of([&] { load_right_censored_csv(nocol, "time", "status"); }) ==
        ErrorCode::kMissingColumn);
  const auto text = temp_csv("rc_text", "time,status,x1\n1.0,1,abc\n");
  CHECK(code_of([&] { load_right_censored_csv(text, "time", "status"); }) ==
        ErrorCode::kNonNumericCell);
  const auto neg = temp_csv("rc_neg", "time,status,x1\n-1.0,1,0.5\n2,1,1\n");
  CHECK(code_of([&] { load_right_censored_csv(neg, "time", "status"); }) ==
        ErrorCode::kNegativeTime);
  const auto miss = temp_csv("rc_miss", "time,status,x1\n1.0,1,NA\n2,1,1\n");
  CHECK(code_of([&] { load_right_censored_csv(miss, "time", "status"); }) ==
        ErrorCode::kMissingValue);
  const auto ragged = temp_csv("rc_ragged", "time,status,x1\n1.0,1\n");
  CHECK(code_of([&] { load_right_censored_csv(ragged, "time", "status"); }) ==
        ErrorCode::kShapeMismatch);
}

TEST_CASE("interval csv accepts inf and empty right endpoints") {
  const auto path = temp_csv("ic_ok", "left,right,x1\n0,1,0.1\n1,2,0.2\n2,inf,0.3\n3,,0.4\n");
  const IntervalDataset d = load_interval_censored_csv(path, "left", "right");
  CHECK(d.rows() == 4);
  CHECK(d.right[1] == 2.0);
  CHECK(std::isinf(d.right[2]));
  CHECK(std::isinf(d.right[3]));
}

TEST_CASE("interval errors") {
  const auto inv = temp_csv("ic_inv", "left,right,x1\n2,1,0.1\n");
  CHECK(code_of([&] { load_interval_censored_csv(inv, "left", "right"); }) ==
        ErrorCode::kInvertedInterval);
  const auto inf = temp_csv("ic_inf", "left,right,x1\n0,inf,0.1\n1,inf,0.2\n");
  CHECK(code_of([&] { load_interval_censored_csv(inf, "left", "right"); }) ==
        ErrorCode::kNoFiniteIntervals);
}

TEST_CASE("validate lists every violation with its location") {
  Dataset d;
  d.time = {1, 2, 3, 4, 5};
  d.status = {1, 0, 1, 1, 1};
  d.covariates = Eigen::MatrixXd::Ones(5, 2);
  d.feature_names = {"a", "b"};
  CHECK(validate(d).empty());

  d.time[4] = -1.0;
  d.covariates(2, 1) = std::nan("");
  const auto v = validate(d);
  REQUIRE(v.size() == 2);
  bool saw_time = false, saw_cov = false;
  for (const auto& e : v) {
    if (e.code == ErrorCode::kNegativeTime && e.row == 4) saw_time = true;
    if (e.code == ErrorCode::kMissingValue && e.row == 2 && e.column == "b") saw_cov = true;
  }
  CHECK(saw_time);
  CHECK(saw_cov);
}

TEST_CASE("write then load is bitwise identical") {
  Eigen::MatrixXd x(3, 2);
  x << 0.1, 1.0 / 3.0, -2.5e-17, 7.0, 1e300, std::nextafter(1.0, 2.0);
  const Dataset d = make_dataset(x, {0.3, 1.0 / 7.0, 2.0}, {1, 0, 1}, {"u", "v"});
  const auto path = (std::filesystem::temp_directory_path() / "rmstscreen_roundtrip.csv").string();
  write_csv(path, d);
  const Dataset back = load_right_censored_csv(path, "time", "status");
  CHECK(back.time == d.time);
  CHECK(back.status == d.status);
  CHECK(back.feature_names == d.feature_names);
  CHECK((back.covariates.array() == d.covariates.array()).all());
}

TEST_CASE("interval write then load is bitwise identical") {
  Eigen::MatrixXd x(3, 1);
  x << 0.1, 0.2, 1.0 / 3.0;
  const double inf = std::numeric_limits<double>::infinity();
  const IntervalDataset d = make_interval_dataset(x, {0, 1.5, 2}, {1, 2.0 / 3.0 + 2, inf});
  const auto path = (std::filesystem::temp_directory_path() / "rmstscreen_ic_roundtrip.csv").string();
  write_csv(path, d);
  const IntervalDataset back = load_interval_censored_csv(path, "left", "right");
  CHECK(back.left == d.left);
  CHECK(back.right == d.right);
  CHECK((back.covariates.array() == d.covariates.array()).all());
}

TEST_CASE("input error classification") {
  CHECK(is_input_error(ErrorCode::kMissingColumn));
  CHECK(is_input_error(ErrorCode::kUnknownScenario));
  CHECK_FALSE(is_input_error(ErrorCode::kNumerical));
}
