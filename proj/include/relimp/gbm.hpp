#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "relimp/dataset.hpp"
#include "relimp/tree.hpp"

namespace relimp {

struct GbmConfig {
  int nTrees = 50000;
  double learnRate = 0.0001;
  double subsampleFraction = 0.95;
  int maxLeaves = 6;
  int minObsLeaf = 3;
  std::uint64_t seed = 42;
  int mseTraceStride = 100;

  void validate() const;  // throws InvalidConfig
};

struct TracePoint {
  int iteration;
  double mse;
};

// Additive least-squares tree ensemble: baseline + sum of shrunken trees.
// Shrinkage is already folded into each stored tree's leaf values.
class GbmModel {
 public:
  GbmModel() = default;
  GbmModel(double baseline, std::vector<RegressionTree> trees, GbmConfig config,
           std::vector<TracePoint> mseTrace, std::vector<std::string> featureNames)
      : baseline_(baseline),
        trees_(std::move(trees)),
        config_(config),
        mseTrace_(std::move(mseTrace)),
        featureNames_(std::move(featureNames)) {}

  double baseline() const { return baseline_; }
  const std::vector<RegressionTree>& trees() const { return trees_; }
  const GbmConfig& config() const { return config_; }
  const std::vector<TracePoint>& mseTrace() const { return mseTrace_; }
  const std::vector<std::string>& featureNames() const { return featureNames_; }

  int totalSplitCount() const;

  // Baseline plus every tree's routed leaf value. Throws ArityMismatch.
  double predictRow(const Eigen::Ref<const Eigen::RowVectorXd>& row) const;
  Eigen::VectorXd predict(const Eigen::Ref<const Eigen::MatrixXd>& rows) const;

 private:
  double baseline_ = 0.0;
  std::vector<RegressionTree> trees_;
  GbmConfig config_;
  std::vector<TracePoint> mseTrace_;
  std::vector<std::string> featureNames_;
};

// Stagewise least-squares boosting with per-stage row subsampling. Each stage
// draws round(subsampleFraction * n) distinct rows from a stream keyed by
// (seed, stage), fits a tree to the current residuals on that draw, shrinks its
// leaf values by learnRate, and records the full-sample training MSE at
// iteration 0, every mseTraceStride iterations, and at the final iteration.
GbmModel fitGbm(const Dataset& dataset, const GbmConfig& config);

// Training mean squared error of the model on a dataset.
double meanSquaredError(const GbmModel& model, const Dataset& dataset);

// 1 - SSE/SST against the evaluated response. Throws ZeroVarianceResponse.
double rSquared(const GbmModel& model, const Dataset& dataset);

}  // namespace relimp
