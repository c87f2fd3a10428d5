#include "relimp/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_set>

#include "relimp/errors.hpp"

namespace relimp {

namespace {

// One CSV record, honoring double quotes with "" escapes.
std::vector<std::string> splitCsvLine(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

bool parseNumber(const std::string& token, double& out) {
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

std::string formatDouble(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

bool needsQuoting(const std::string& s) {
  return s.find_first_of(",\"\n") != std::string::npos;
}

std::string quoteField(const std::string& s) {
  if (!needsQuoting(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

Dataset::Dataset(std::vector<std::string> columnNames, Eigen::MatrixXd values,
                 Eigen::Index responseIndex, std::vector<std::string> rowLabels)
    : columnNames_(std::move(columnNames)),
      values_(std::move(values)),
      responseIndex_(responseIndex),
      rowLabels_(std::move(rowLabels)) {
  if (static_cast<Eigen::Index>(columnNames_.size()) != values_.cols())
    throw Error("column name count does not match value columns");
  if (responseIndex_ < 0 || responseIndex_ >= values_.cols())
    throw Error("response index out of range");
  if (values_.rows() < 2) throw Error("dataset needs at least two rows");
  if (!rowLabels_.empty() && static_cast<Eigen::Index>(rowLabels_.size()) != values_.rows())
    throw Error("row label count does not match rows");

  std::unordered_set<std::string> seen;
  for (const auto& name : columnNames_) {
    if (name.empty()) throw Error("column names must be non-empty");
    if (!seen.insert(name).second) throw DuplicateColumnName(name);
  }
  for (Eigen::Index r = 0; r < values_.rows(); ++r) {
    if (isMissing(values_(r, responseIndex_))) throw MissingInResponse(static_cast<long>(r));
  }
}

Eigen::MatrixXd Dataset::predictors() const {
  Eigen::MatrixXd out(rows(), predictorCount());
  Eigen::Index k = 0;
  for (Eigen::Index c = 0; c < cols(); ++c) {
    if (c == responseIndex_) continue;
    out.col(k++) = values_.col(c);
  }
  return out;
}

std::vector<std::string> Dataset::predictorNames() const {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(predictorCount()));
  for (Eigen::Index c = 0; c < cols(); ++c) {
    if (c != responseIndex_) out.push_back(columnNames_[static_cast<std::size_t>(c)]);
  }
  return out;
}

Eigen::Index Dataset::columnIndex(const std::string& name) const {
  for (std::size_t i = 0; i < columnNames_.size(); ++i) {
    if (columnNames_[i] == name) return static_cast<Eigen::Index>(i);
  }
  throw UnknownFeature(name);
}

Eigen::Index Dataset::predictorIndex(const std::string& name) const {
  Eigen::Index k = 0;
  for (Eigen::Index c = 0; c < cols(); ++c) {
    if (c == responseIndex_) continue;
    if (columnNames_[static_cast<std::size_t>(c)] == name) return k;
    ++k;
  }
  throw UnknownFeature(name);
}

Dataset Dataset::withPredictors(const std::vector<std::string>& keep) const {
  std::vector<std::string> names;
  Eigen::MatrixXd vals(rows(), static_cast<Eigen::Index>(keep.size()) + 1);
  Eigen::Index k = 0;
  for (const auto& name : keep) {
    const Eigen::Index c = columnIndex(name);
    if (c == responseIndex_) throw UnknownFeature(name);
    names.push_back(name);
    vals.col(k++) = values_.col(c);
  }
  names.push_back(responseName());
  vals.col(k) = values_.col(responseIndex_);
  return Dataset(std::move(names), std::move(vals), k, rowLabels_);
}

Dataset loadCsv(const std::string& path, const std::string& responseName) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");

  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw Error("'" + path + "' is empty");

  std::vector<std::string> header = splitCsvLine(lines[0]);
  const bool hasLabels = !header.empty() && header[0] == "period";
  const std::size_t firstDataCol = hasLabels ? 1 : 0;
  std::vector<std::string> names(header.begin() + static_cast<std::ptrdiff_t>(firstDataCol), header.end());
  if (names.empty()) throw Error("'" + path + "' has no data columns");

  Eigen::Index responseIndex = -1;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == responseName) responseIndex = static_cast<Eigen::Index>(i);
  }
  if (responseIndex < 0) throw MissingResponseColumn(responseName);

  const auto nRows = static_cast<Eigen::Index>(lines.size() - 1);
  const auto nCols = static_cast<Eigen::Index>(names.size());
  Eigen::MatrixXd values(nRows, nCols);
  std::vector<std::string> labels;
  if (hasLabels) labels.reserve(static_cast<std::size_t>(nRows));

  for (Eigen::Index r = 0; r < nRows; ++r) {
    std::vector<std::string> fields = splitCsvLine(lines[static_cast<std::size_t>(r) + 1]);
    if (static_cast<Eigen::Index>(fields.size()) != static_cast<Eigen::Index>(header.size()))
      throw Error("row " + std::to_string(r) + " has " + std::to_string(fields.size()) +
                  " fields, header has " + std::to_string(header.size()));
    if (hasLabels) labels.push_back(fields[0]);
    for (Eigen::Index c = 0; c < nCols; ++c) {
      const std::string& token = fields[static_cast<std::size_t>(c) + firstDataCol];
      if (token.empty() || token == "NA") {
        if (c == responseIndex) throw MissingInResponse(static_cast<long>(r));
        values(r, c) = missingValue();
        continue;
      }
      double parsed = 0.0;
      if (!parseNumber(token, parsed) || !std::isfinite(parsed))
        throw UnparseableCell(static_cast<long>(r), static_cast<long>(c), token);
      values(r, c) = parsed;
    }
  }

  return Dataset(std::move(names), std::move(values), responseIndex, std::move(labels));
}

void saveCsv(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");

  const bool hasLabels = !dataset.rowLabels().empty();
  if (hasLabels) out << "period,";
  const auto& names = dataset.columnNames();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out << ',';
    out << quoteField(names[i]);
  }
  out << '\n';

  for (Eigen::Index r = 0; r < dataset.rows(); ++r) {
    if (hasLabels) out << quoteField(dataset.rowLabels()[static_cast<std::size_t>(r)]) << ',';
    for (Eigen::Index c = 0; c < dataset.cols(); ++c) {
      if (c) out << ',';
      const double v = dataset.values()(r, c);
      out << (isMissing(v) ? "NA" : formatDouble(v));
    }
    out << '\n';
  }
}

ColumnStats columnStats(const Dataset& dataset, Eigen::Index col) {
  ColumnStats stats;
  stats.min = std::numeric_limits<double>::infinity();
  stats.max = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  Eigen::Index n = 0;
  for (Eigen::Index r = 0; r < dataset.rows(); ++r) {
    const double v = dataset.values()(r, col);
    if (isMissing(v)) {
      ++stats.missingCount;
      continue;
    }
    sum += v;
    stats.min = std::min(stats.min, v);
    stats.max = std::max(stats.max, v);
    ++n;
  }
  if (n == 0) throw AllMissingFeature(dataset.columnNames()[static_cast<std::size_t>(col)]);
  stats.mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (Eigen::Index r = 0; r < dataset.rows(); ++r) {
    const double v = dataset.values()(r, col);
    if (isMissing(v)) continue;
    const double d = v - stats.mean;
    ss += d * d;
  }
  stats.stdDev = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
  return stats;
}

void requirePredictorsMatch(const Dataset& dataset, const std::vector<std::string>& expected) {
  const std::vector<std::string> got = dataset.predictorNames();
  if (got.size() != expected.size())
    throw ArityMismatch(static_cast<long>(got.size()), static_cast<long>(expected.size()));
  for (std::size_t j = 0; j < expected.size(); ++j)
    if (got[j] != expected[j]) throw UnknownFeature(got[j]);
}

std::vector<double> yoyTransform(const std::vector<double>& series) {
  if (series.size() < 2) throw TooShort();
  std::vector<double> out(series.size() - 1);
  for (std::size_t t = 0; t + 1 < series.size(); ++t) {
    if (series[t] == 0.0) throw DivisionByZero(static_cast<long>(t));
    out[t] = 100.0 * (series[t + 1] - series[t]) / series[t];
  }
  return out;
}

Dataset standardize(const Dataset& dataset, bool includeResponse) {
  Eigen::MatrixXd values = dataset.values();
  for (Eigen::Index c = 0; c < dataset.cols(); ++c) {
    if (c == dataset.responseIndex() && !includeResponse) continue;
    const ColumnStats stats = columnStats(dataset, c);
    if (stats.stdDev == 0.0) throw ZeroVariance(dataset.columnNames()[static_cast<std::size_t>(c)]);
    for (Eigen::Index r = 0; r < dataset.rows(); ++r) {
      double& v = values(r, c);
      if (!isMissing(v)) v = (v - stats.mean) / stats.stdDev;
    }
  }
  return Dataset(dataset.columnNames(), std::move(values), dataset.responseIndex(), dataset.rowLabels());
}

}  // namespace relimp
