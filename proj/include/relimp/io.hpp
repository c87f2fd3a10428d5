#pragma once

#include <string>
#include <vector>

#include "relimp/econometrics.hpp"
#include "relimp/gbm.hpp"
#include "relimp/importance.hpp"
#include "relimp/pdp.hpp"

namespace relimp {

// Model persistence: one JSON document {config, baseline, feature_names,
// trees, mse_trace}. Trees are nested {feature, threshold, improvement,
// missing_left, left, right} objects with {value, count} leaves. A loaded
// model reproduces the original's predictions exactly.
void saveModelJson(const GbmModel& model, const std::string& path);
GbmModel loadModelJson(const std::string& path);

// CSV with columns iteration,mse.
void writeMseTraceCsv(const GbmModel& model, const std::string& path);

// A report's scores sorted by scaled value descending (original order among
// ties), with competition ranks: tied scores share the lower rank number.
struct RankedScore {
  std::string feature;
  double raw = 0.0;
  double scaled = 0.0;
  int rank = 0;
};
std::vector<RankedScore> rankedScores(const ImportanceReport& report);

// importance.json holds an array with one object per method:
// {method, metric?, n_shuffles?, seed?, scores: [{feature, raw, scaled, rank}]}.
// importance.csv carries the same rows with a leading method column.
void writeImportanceJson(const std::vector<ImportanceReport>& reports, const std::string& path);
void writeImportanceCsv(const std::vector<ImportanceReport>& reports, const std::string& path);

void writeRegressionJson(const RegressionSummary& summary, const std::string& path);
void writeDominanceJson(const DominanceResult& result, const std::string& path);
void writeRelativeWeightsJson(const RelativeWeightsResult& result, const std::string& path);

// Side-by-side per-feature comparison of every baseline importance notion:
// feature,beta_weight,zero_order_r,usefulness,general_dominance,relative_weight.
void writeBaselinesCsv(const RegressionSummary& summary,
                       const std::vector<double>& usefulnessValues,
                       const DominanceResult& dominance, const RelativeWeightsResult& weights,
                       const std::string& path);

// CSV with columns grid_value,centered_dependence.
void writePdpCsv(const PdpCurve& curve, const std::string& path);

// FNV-1a 64-bit hash of the file's bytes, as 16 hex digits.
std::string fileFingerprint(const std::string& path);

}  // namespace relimp
