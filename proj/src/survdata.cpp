#include "rmstscreen/survdata.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace rmstscreen {
namespace {

std::vector<std::string> default_names(std::size_t p) {
  std::vector<std::string> names;
  names.reserve(p);
  for (std::size_t j = 0; j < p; ++j) names.push_back("x" + std::to_string(j + 1));
  return names;
}

std::string trim(std::string_view s) {
  auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  auto last = s.find_last_not_of(" \t\r\n");
  s = s.substr(first, last - first + 1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return std::string(s);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(trim(std::string_view(line).substr(start)));
      return fields;
    }
    fields.push_back(trim(std::string_view(line).substr(start, comma - start)));
    start = comma + 1;
  }
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool is_missing_token(const std::string& cell) {
  const std::string l = lower(cell);
  return cell.empty() || l == "na" || l == "nan" || l == "null";
}

std::string where(std::size_t row, const std::string& column) {
  return "row " + std::to_string(row) + ", column '" + column + "'";
}

double parse_number(const std::string& cell, std::size_t row, const std::string& column) {
  if (is_missing_token(cell)) {
    throw Error(ErrorCode::kMissingValue, "missing value at " + where(row, column));
  }
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  if (*begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::kNonNumericCell,
                "non-numeric cell '" + cell + "' at " + where(row, column));
  }
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::kNonNumericCell,
                "non-finite value '" + cell + "' at " + where(row, column));
  }
  return value;
}

struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

RawTable read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kMissingFile, "cannot open file '" + path + "'");
  RawTable table;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!have_header) {
      // Skip a UTF-8 byte-order mark.
      if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
      if (trim(line).empty()) continue;
      table.header = split_fields(line);
      have_header = true;
      continue;
    }
    if (trim(line).empty()) continue;
    auto fields = split_fields(line);
    if (fields.size() != table.header.size()) {
      throw Error(ErrorCode::kShapeMismatch,
                  "row " + std::to_string(table.rows.size()) + " has " +
                      std::to_string(fields.size()) + " fields, header has " +
                      std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(fields));
  }
  if (!have_header) throw Error(ErrorCode::kInvalidArgument, "file '" + path + "' has no header row");
  return table;
}

std::size_t column_index(const RawTable& table, const std::string& name) {
  auto it = std::find(table.header.begin(), table.header.end(), name);
  if (it == table.header.end()) {
    throw Error(ErrorCode::kMissingColumn, "missing column '" + name + "'");
  }
  return static_cast<std::size_t>(it - table.header.begin());
}

// Fills the covariate matrix from every column not listed in `skip`.
void read_covariates(const RawTable& table, const std::vector<std::size_t>& skip,
                     Eigen::MatrixXd& covariates, std::vector<std::string>& names) {
  std::vector<std::size_t> cols;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (std::find(skip.begin(), skip.end(), c) == skip.end()) cols.push_back(c);
  }
  covariates.resize(static_cast<Eigen::Index>(table.rows.size()),
                    static_cast<Eigen::Index>(cols.size()));
  names.clear();
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const std::string& name = table.header[cols[k]];
    names.push_back(name);
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      covariates(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          parse_number(table.rows[i][cols[k]], i, name);
    }
  }
}

void throw_first(const std::vector<Violation>& violations) {
  if (violations.empty()) return;
  const Violation& v = violations.front();
  std::string message = v.message;
  if (v.row >= 0) message += " (row " + std::to_string(v.row) + ")";
  if (!v.column.empty()) message += " (column '" + v.column + "')";
  throw Error(v.code, message);
}

void check_covariates(const Eigen::MatrixXd& x, const std::vector<std::string>& names,
                      std::vector<Violation>& out) {
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const std::string name = static_cast<std::size_t>(j) < names.size()
                                 ? names[static_cast<std::size_t>(j)]
                                 : "x" + std::to_string(j + 1);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      if (!std::isfinite(x(i, j))) {
        out.push_back({ErrorCode::kMissingValue, i, name, "non-finite covariate value"});
      }
    }
  }
}

}  // namespace

std::vector<Violation> validate(const Dataset& data) {
  std::vector<Violation> out;
  const std::size_t n = data.time.size();
  if (data.status.size() != n || static_cast<std::size_t>(data.covariates.rows()) != n) {
    out.push_back({ErrorCode::kShapeMismatch, -1, "",
                   "time, status and covariate row counts differ"});
    return out;
  }
  if (n < 2) out.push_back({ErrorCode::kInvalidArgument, -1, "", "need at least 2 rows"});
  if (data.covariates.cols() < 1) {
    out.push_back({ErrorCode::kInvalidArgument, -1, "", "need at least 1 covariate"});
  }
  if (data.feature_names.size() != data.cols()) {
    out.push_back({ErrorCode::kShapeMismatch, -1, "", "feature name count differs from column count"});
  }
  bool any_event = false;
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = static_cast<std::ptrdiff_t>(i);
    if (!std::isfinite(data.time[i])) {
      out.push_back({ErrorCode::kNonNumericCell, row, "time", "non-finite time"});
    } else if (data.time[i] < 0.0) {
      out.push_back({ErrorCode::kNegativeTime, row, "time", "negative time"});
    }
    if (data.status[i] != 0 && data.status[i] != 1) {
      out.push_back({ErrorCode::kInvalidStatus, row, "status", "invalid status value"});
    }
    any_event = any_event || data.status[i] == 1;
  }
  if (n > 0 && !any_event) out.push_back({ErrorCode::kNoEvents, -1, "status", "no observed events"});
  check_covariates(data.covariates, data.feature_names, out);
  return out;
}

std::vector<Violation> validate(const IntervalDataset& data) {
  std::vector<Violation> out;
  const std::size_t n = data.left.size();
  if (data.right.size() != n || static_cast<std::size_t>(data.covariates.rows()) != n) {
    out.push_back({ErrorCode::kShapeMismatch, -1, "",
                   "left, right and covariate row counts differ"});
    return out;
  }
  if (n < 2) out.push_back({ErrorCode::kInvalidArgument, -1, "", "need at least 2 rows"});
  if (data.covariates.cols() < 1) {
    out.push_back({ErrorCode::kInvalidArgument, -1, "", "need at least 1 covariate"});
  }
  if (data.feature_names.size() != data.cols()) {
    out.push_back({ErrorCode::kShapeMismatch, -1, "", "feature name count differs from column count"});
  }
  bool any_finite = false;
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = static_cast<std::ptrdiff_t>(i);
    const double l = data.left[i];
    const double r = data.right[i];
    if (!std::isfinite(l)) {
      out.push_back({ErrorCode::kNonNumericCell, row, "left", "non-finite left endpoint"});
      continue;
    }
    if (l < 0.0) out.push_back({ErrorCode::kNegativeTime, row, "left", "negative left endpoint"});
    if (std::isnan(r) || r == -std::numeric_limits<double>::infinity()) {
      out.push_back({ErrorCode::kNonNumericCell, row, "right", "invalid right endpoint"});
      continue;
    }
    if (!(l < r)) out.push_back({ErrorCode::kInvertedInterval, row, "", "inverted interval"});
    any_finite = any_finite || std::isfinite(r);
  }
  if (n > 0 && !any_finite) {
    out.push_back({ErrorCode::kNoFiniteIntervals, -1, "right", "no finite intervals"});
  }
  check_covariates(data.covariates, data.feature_names, out);
  return out;
}

void require_valid(const Dataset& data) { throw_first(validate(data)); }
void require_valid(const IntervalDataset& data) { throw_first(validate(data)); }

Dataset make_dataset(Eigen::MatrixXd covariates, std::vector<double> time,
                     std::vector<int> status, std::vector<std::string> feature_names) {
  if (feature_names.empty()) feature_names = default_names(static_cast<std::size_t>(covariates.cols()));
  Dataset data{std::move(covariates), std::move(time), std::move(status), std::move(feature_names)};
  require_valid(data);
  return data;
}

IntervalDataset make_interval_dataset(Eigen::MatrixXd covariates, std::vector<double> left,
                                      std::vector<double> right,
                                      std::vector<std::string> feature_names) {
  if (feature_names.empty()) feature_names = default_names(static_cast<std::size_t>(covariates.cols()));
  IntervalDataset data{std::move(covariates), std::move(left), std::move(right),
                       std::move(feature_names)};
  require_valid(data);
  return data;
}

Dataset load_right_censored_csv(const std::string& path, const std::string& time_col,
                                const std::string& status_col) {
  const RawTable table = read_table(path);
  const std::size_t tcol = column_index(table, time_col);
  const std::size_t scol = column_index(table, status_col);
  Dataset data;
  data.time.reserve(table.rows.size());
  data.status.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const double t = parse_number(table.rows[i][tcol], i, time_col);
    if (t < 0.0) throw Error(ErrorCode::kNegativeTime, "negative time at " + where(i, time_col));
    data.time.push_back(t);
    const std::string& s = table.rows[i][scol];
    if (s == "0") {
      data.status.push_back(0);
    } else if (s == "1") {
      data.status.push_back(1);
    } else {
      throw Error(ErrorCode::kInvalidStatus,
                  "invalid status value '" + s + "' at " + where(i, status_col));
    }
  }
  read_covariates(table, {tcol, scol}, data.covariates, data.feature_names);
  require_valid(data);
  return data;
}

IntervalDataset load_interval_censored_csv(const std::string& path, const std::string& left_col,
                                           const std::string& right_col) {
  const RawTable table = read_table(path);
  const std::size_t lcol = column_index(table, left_col);
  const std::size_t rcol = column_index(table, right_col);
  IntervalDataset data;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const double l = parse_number(table.rows[i][lcol], i, left_col);
    const std::string& rcell = table.rows[i][rcol];
    double r = std::numeric_limits<double>::infinity();
    if (!rcell.empty() && lower(rcell) != "inf") r = parse_number(rcell, i, right_col);
    if (!(l < r)) {
      throw Error(ErrorCode::kInvertedInterval, "inverted interval at row " + std::to_string(i));
    }
    data.left.push_back(l);
    data.right.push_back(r);
  }
  read_covariates(table, {lcol, rcol}, data.covariates, data.feature_names);
  require_valid(data);
  return data;
}

std::string format_double(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_csv(std::ostream& out, const Dataset& data, const std::string& time_col,
               const std::string& status_col) {
  out << time_col << ',' << status_col;
  for (const auto& name : data.feature_names) out << ',' << name;
  out << '\n';
  for (std::size_t i = 0; i < data.rows(); ++i) {
    out << format_double(data.time[i]) << ',' << data.status[i];
    for (Eigen::Index j = 0; j < data.covariates.cols(); ++j) {
      out << ',' << format_double(data.covariates(static_cast<Eigen::Index>(i), j));
    }
    out << '\n';
  }
}

void write_csv(std::ostream& out, const IntervalDataset& data, const std::string& left_col,
               const std::string& right_col) {
  out << left_col << ',' << right_col;
  for (const auto& name : data.feature_names) out << ',' << name;
  out << '\n';
  for (std::size_t i = 0; i < data.rows(); ++i) {
    out << format_double(data.left[i]) << ',' << format_double(data.right[i]);
    for (Eigen::Index j = 0; j < data.covariates.cols(); ++j) {
      out << ',' << format_double(data.covariates(static_cast<Eigen::Index>(i), j));
    }
    out << '\n';
  }
}

namespace {
template <class Data>
void write_file(const std::string& path, const Data& data, const std::string& a,
                const std::string& b) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  write_csv(out, data, a, b);
  if (!out) throw Error(ErrorCode::kIo, "write failed for '" + path + "'");
}
}  // namespace

void write_csv(const std::string& path, const Dataset& data, const std::string& time_col,
               const std::string& status_col) {
  write_file(path, data, time_col, status_col);
}

void write_csv(const std::string& path, const IntervalDataset& data, const std::string& left_col,
               const std::string& right_col) {
  write_file(path, data, left_col, right_col);
}

}  // namespace rmstscreen
