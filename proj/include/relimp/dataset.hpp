#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

namespace relimp {

// Missing cells are stored as quiet NaN inside the value matrix.
inline double missingValue() { return std::numeric_limits<double>::quiet_NaN(); }
inline bool isMissing(double v) { return std::isnan(v); }

// Per-column summary over the non-missing entries.
struct ColumnStats {
  double mean = 0.0;
  double stdDev = 0.0;  // sample convention (divide by n - 1)
  double min = 0.0;
  double max = 0.0;
  Eigen::Index missingCount = 0;
};

// Immutable named numeric table with an explicit missingness mask (NaN cells)
// and one designated response column. Safe to share across threads once built.
class Dataset {
 public:
  Dataset(std::vector<std::string> columnNames, Eigen::MatrixXd values, Eigen::Index responseIndex,
          std::vector<std::string> rowLabels = {});

  Eigen::Index rows() const { return values_.rows(); }
  Eigen::Index cols() const { return values_.cols(); }
  Eigen::Index predictorCount() const { return values_.cols() - 1; }
  Eigen::Index responseIndex() const { return responseIndex_; }

  const std::vector<std::string>& columnNames() const { return columnNames_; }
  const std::vector<std::string>& rowLabels() const { return rowLabels_; }
  const Eigen::MatrixXd& values() const { return values_; }
  const std::string& responseName() const { return columnNames_[static_cast<std::size_t>(responseIndex_)]; }

  Eigen::VectorXd response() const { return values_.col(responseIndex_); }

  // Predictor columns in original order, response removed.
  Eigen::MatrixXd predictors() const;
  std::vector<std::string> predictorNames() const;

  // Index into the full column set; throws UnknownFeature.
  Eigen::Index columnIndex(const std::string& name) const;
  // Index into the predictor set (0..p-1); throws UnknownFeature (also for the response).
  Eigen::Index predictorIndex(const std::string& name) const;

  // Restriction to a predictor subset (response kept). Order follows `keep`.
  Dataset withPredictors(const std::vector<std::string>& keep) const;

 private:
  std::vector<std::string> columnNames_;
  Eigen::MatrixXd values_;
  Eigen::Index responseIndex_;
  std::vector<std::string> rowLabels_;
};

// Loads an RFC-4180-style CSV: comma delimiter, first row is the header,
// decimal point '.', missing cells are the literal token `NA` or empty. A
// leading column named `period` is treated as row labels.
Dataset loadCsv(const std::string& path, const std::string& responseName);

// Writes the dataset back out in the same format (row labels first when present,
// shortest round-trip formatting for finite values, `NA` for missing cells).
void saveCsv(const Dataset& dataset, const std::string& path);

// Stats over the non-missing entries of one column (full column set index).
ColumnStats columnStats(const Dataset& dataset, Eigen::Index col);

// Checks that the dataset's predictor names equal `expected`, in order.
// Throws ArityMismatch on a count difference, UnknownFeature on a name one.
void requirePredictorsMatch(const Dataset& dataset, const std::vector<std::string>& expected);

// Percent change between consecutive entries: out[t] = 100*(s[t+1]-s[t])/s[t].
std::vector<double> yoyTransform(const std::vector<double>& series);

// Rescales every predictor column to mean 0, sample std 1 over its non-missing
// entries; missing entries stay missing. The response is only touched when
// includeResponse is set.
Dataset standardize(const Dataset& dataset, bool includeResponse = false);

}  // namespace relimp
