#include "relimp/importance.hpp"

#include <algorithm>
#include <cmath>

#include "relimp/errors.hpp"
#include "relimp/rng.hpp"
#include "relimp/tree.hpp"

namespace relimp {

namespace {

// Fill in scaled scores: 100 * raw / max(raw). All-zero raw stays all zero.
void rescaleScores(std::vector<ImportanceEntry>& scores) {
  double maxRaw = 0.0;
  for (const ImportanceEntry& entry : scores) maxRaw = std::max(maxRaw, entry.raw);
  for (ImportanceEntry& entry : scores)
    entry.scaled = maxRaw > 0.0 ? 100.0 * entry.raw / maxRaw : 0.0;
}

std::vector<ImportanceEntry> blankScores(const GbmModel& model) {
  std::vector<ImportanceEntry> scores;
  scores.reserve(model.featureNames().size());
  for (const std::string& name : model.featureNames()) scores.push_back({name, 0.0, 0.0});
  return scores;
}

double metricValue(const GbmModel& model, const Eigen::MatrixXd& predictors,
                   const Eigen::VectorXd& response, PermutationMetric metric) {
  double sse = 0.0;
  for (Eigen::Index i = 0; i < predictors.rows(); ++i) {
    const double err = response(i) - model.predictRow(predictors.row(i));
    sse += err * err;
  }
  const double mse = sse / static_cast<double>(predictors.rows());
  return metric == PermutationMetric::rmse ? std::sqrt(mse) : mse;
}

}  // namespace

const char* toString(ImportanceMethod method) {
  switch (method) {
    case ImportanceMethod::frequency: return "frequency";
    case ImportanceMethod::split: return "split";
    case ImportanceMethod::permutation: return "permutation";
  }
  return "unknown";
}

const char* toString(PermutationMetric metric) {
  return metric == PermutationMetric::rmse ? "rmse" : "mse";
}

ImportanceReport selectionFrequency(const GbmModel& model) {
  if (model.totalSplitCount() == 0) throw NoSplitsInModel();
  ImportanceReport report;
  report.method = ImportanceMethod::frequency;
  report.scores = blankScores(model);
  for (const RegressionTree& tree : model.trees())
    for (const TreeNode& node : tree.nodes())
      if (!node.isLeaf()) report.scores[node.split.featureIndex].raw += 1.0;
  rescaleScores(report.scores);
  return report;
}

ImportanceReport splitImportance(const GbmModel& model) {
  if (model.totalSplitCount() == 0) throw NoSplitsInModel();
  ImportanceReport report;
  report.method = ImportanceMethod::split;
  report.scores = blankScores(model);
  for (const RegressionTree& tree : model.trees())
    for (const TreeNode& node : tree.nodes())
      if (!node.isLeaf()) report.scores[node.split.featureIndex].raw += node.split.improvement;
  const double nTrees = static_cast<double>(model.trees().size());
  for (ImportanceEntry& entry : report.scores) entry.raw /= nTrees;
  rescaleScores(report.scores);
  return report;
}

ImportanceReport permutationImportance(const GbmModel& model, const Dataset& dataset,
                                       PermutationMetric metric, int nShuffles,
                                       std::uint64_t seed) {
  if (nShuffles < 1) throw InvalidConfig("n_shuffles must be at least 1");
  requirePredictorsMatch(dataset, model.featureNames());

  const Eigen::MatrixXd predictors = dataset.predictors();
  const Eigen::VectorXd response = dataset.response();
  const double baseline = metricValue(model, predictors, response, metric);

  ImportanceReport report;
  report.method = ImportanceMethod::permutation;
  report.metric = metric;
  report.nShuffles = nShuffles;
  report.seed = seed;
  report.scores = blankScores(model);

  const Eigen::Index n = predictors.rows();
  Eigen::MatrixXd shuffled = predictors;
  for (Eigen::Index j = 0; j < predictors.cols(); ++j) {
    double total = 0.0;
    for (int s = 0; s < nShuffles; ++s) {
      SplitMix64 rng = streamFor(seed, {stream::kPermutation, static_cast<std::uint64_t>(j),
                                        static_cast<std::uint64_t>(s)});
      std::vector<double> column(predictors.col(j).data(), predictors.col(j).data() + n);
      shuffleInPlace(column, rng);
      for (Eigen::Index i = 0; i < n; ++i) shuffled(i, j) = column[static_cast<std::size_t>(i)];
      total += metricValue(model, shuffled, response, metric);
    }
    shuffled.col(j) = predictors.col(j);  // restore before moving on
    report.scores[static_cast<std::size_t>(j)].raw = std::max(0.0, total / nShuffles - baseline);
  }
  rescaleScores(report.scores);
  return report;
}

}  // namespace relimp
