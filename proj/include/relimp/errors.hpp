#pragma once

#include <stdexcept>
#include <string>

namespace relimp {

// Base type for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---- dataset loading / transforms ----

class MissingResponseColumn : public Error {
 public:
  explicit MissingResponseColumn(const std::string& name)
      : Error("response column '" + name + "' not found in header") {}
};

class UnparseableCell : public Error {
 public:
  UnparseableCell(long row, long col, const std::string& token)
      : Error("cell at data row " + std::to_string(row) + ", column " + std::to_string(col) +
              " is not a number: '" + token + "'"),
        row(row),
        col(col) {}
  long row;
  long col;
};

class MissingInResponse : public Error {
 public:
  explicit MissingInResponse(long row)
      : Error("response value missing at data row " + std::to_string(row)), row(row) {}
  long row;
};

class DuplicateColumnName : public Error {
 public:
  explicit DuplicateColumnName(const std::string& name)
      : Error("duplicate column name '" + name + "'") {}
};

class DivisionByZero : public Error {
 public:
  explicit DivisionByZero(long position)
      : Error("zero denominator at position " + std::to_string(position)), position(position) {}
  long position;
};

class TooShort : public Error {
 public:
  TooShort() : Error("series needs at least two entries") {}
};

class ZeroVariance : public Error {
 public:
  explicit ZeroVariance(const std::string& column)
      : Error("column '" + column + "' has zero variance"), column(column) {}
  std::string column;
};

// ---- trees / boosting ----

class EmptyRowSet : public Error {
 public:
  EmptyRowSet() : Error("cannot grow a tree on an empty row set") {}
};

class SubsampleTooSmall : public Error {
 public:
  SubsampleTooSmall(long sampled, long needed)
      : Error("subsample of " + std::to_string(sampled) + " rows cannot host a split needing " +
              std::to_string(needed)) {}
};

class InvalidConfig : public Error {
 public:
  explicit InvalidConfig(const std::string& what) : Error("invalid configuration: " + what) {}
};

class ArityMismatch : public Error {
 public:
  ArityMismatch(long got, long expected)
      : Error("row has " + std::to_string(got) + " predictors, model expects " +
              std::to_string(expected)) {}
};

// ---- importance / pdp ----

class NoSplitsInModel : public Error {
 public:
  NoSplitsInModel() : Error("model contains no splits; importance is undefined") {}
};

class UnknownFeature : public Error {
 public:
  explicit UnknownFeature(const std::string& name)
      : Error("unknown feature '" + name + "'"), feature(name) {}
  std::string feature;
};

class AllMissingFeature : public Error {
 public:
  explicit AllMissingFeature(const std::string& name)
      : Error("feature '" + name + "' has no observed values"), feature(name) {}
  std::string feature;
};

// ---- regression baselines ----

class RankDeficient : public Error {
 public:
  explicit RankDeficient(const std::string& detail) : Error("design matrix is rank deficient: " + detail) {}
};

class InsufficientRows : public Error {
 public:
  InsufficientRows(long used, long needed)
      : Error(std::to_string(used) + " complete rows, need more than " + std::to_string(needed)) {}
};

class TooManyPredictors : public Error {
 public:
  explicit TooManyPredictors(long count)
      : Error("submodel enumeration capped at 20 predictors, got " + std::to_string(count)) {}
};

class ZeroVarianceResponse : public Error {
 public:
  ZeroVarianceResponse() : Error("response has zero variance") {}
};

// ---- pipeline ----

class NoSignificantFeatures : public Error {
 public:
  explicit NoSignificantFeatures(double alpha)
      : Error("no predictor is significant at alpha = " + std::to_string(alpha)) {}
};

}  // namespace relimp
