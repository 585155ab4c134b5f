#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rmstscreen/error.hpp"

namespace rmstscreen {

// Right-censored sample: observed times Y = min(T, C), event indicators
// Delta = I(T <= C) and an n x p covariate matrix stored column-major, so a
// single feature is a contiguous column.
struct Dataset {
  Eigen::MatrixXd covariates;
  std::vector<double> time;
  std::vector<int> status;
  std::vector<std::string> feature_names;

  std::size_t rows() const { return time.size(); }
  std::size_t cols() const { return static_cast<std::size_t>(covariates.cols()); }
};

// Interval-censored sample: T is known to lie in (left, right]. A right
// endpoint of +inf encodes a right-censored subject.
struct IntervalDataset {
  Eigen::MatrixXd covariates;
  std::vector<double> left;
  std::vector<double> right;
  std::vector<std::string> feature_names;

  std::size_t rows() const { return left.size(); }
  std::size_t cols() const { return static_cast<std::size_t>(covariates.cols()); }
};

struct Violation {
  ErrorCode code;
  std::ptrdiff_t row;  // -1 for dataset-level violations
  std::string column;  // empty when not tied to a column
  std::string message;
};

// Reports every violated invariant. An empty result means the dataset is valid.
std::vector<Violation> validate(const Dataset& data);
std::vector<Violation> validate(const IntervalDataset& data);

// Throws Error carrying the first violation's code, if any.
void require_valid(const Dataset& data);
void require_valid(const IntervalDataset& data);

// Builds a dataset and validates it. Feature names default to x1..xp.
Dataset make_dataset(Eigen::MatrixXd covariates, std::vector<double> time,
                     std::vector<int> status,
                     std::vector<std::string> feature_names = {});
IntervalDataset make_interval_dataset(Eigen::MatrixXd covariates,
                                      std::vector<double> left,
                                      std::vector<double> right,
                                      std::vector<std::string> feature_names = {});

// CSV ingestion. Header row required; every column other than the named
// response columns is a covariate, kept in file order.
Dataset load_right_censored_csv(const std::string& path, const std::string& time_col,
                                const std::string& status_col);
IntervalDataset load_interval_censored_csv(const std::string& path,
                                           const std::string& left_col,
                                           const std::string& right_col);

// Writers emit 17 significant digits so a reload is bitwise identical.
void write_csv(std::ostream& out, const Dataset& data,
               const std::string& time_col = "time",
               const std::string& status_col = "status");
void write_csv(const std::string& path, const Dataset& data,
               const std::string& time_col = "time",
               const std::string& status_col = "status");
void write_csv(std::ostream& out, const IntervalDataset& data,
               const std::string& left_col = "left",
               const std::string& right_col = "right");
void write_csv(const std::string& path, const IntervalDataset& data,
               const std::string& left_col = "left",
               const std::string& right_col = "right");

// 17 significant digits; round-trips exactly through strtod.
std::string format_double(double value);

}  // namespace rmstscreen
