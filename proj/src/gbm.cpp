#include "relimp/gbm.hpp"

#include <cmath>

#include "relimp/errors.hpp"
#include "relimp/rng.hpp"

namespace relimp {

void GbmConfig::validate() const {
  if (nTrees < 1) throw InvalidConfig("nTrees must be >= 1");
  if (!(learnRate > 0.0) || learnRate > 1.0) throw InvalidConfig("learnRate must be in (0, 1]");
  if (!(subsampleFraction > 0.0) || subsampleFraction > 1.0)
    throw InvalidConfig("subsampleFraction must be in (0, 1]");
  if (maxLeaves < 1) throw InvalidConfig("maxLeaves must be >= 1");
  if (minObsLeaf < 1) throw InvalidConfig("minObsLeaf must be >= 1");
  if (mseTraceStride < 1) throw InvalidConfig("mseTraceStride must be >= 1");
}

int GbmModel::totalSplitCount() const {
  int n = 0;
  for (const auto& tree : trees_) n += tree.splitCount();
  return n;
}

double GbmModel::predictRow(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
  if (row.size() != static_cast<Eigen::Index>(featureNames_.size()))
    throw ArityMismatch(row.size(), static_cast<long>(featureNames_.size()));
  double out = baseline_;
  for (const auto& tree : trees_) out += tree.predictRow(row);
  return out;
}

Eigen::VectorXd GbmModel::predict(const Eigen::Ref<const Eigen::MatrixXd>& rows) const {
  Eigen::VectorXd out(rows.rows());
  for (Eigen::Index i = 0; i < rows.rows(); ++i) out(i) = predictRow(rows.row(i));
  return out;
}

GbmModel fitGbm(const Dataset& dataset, const GbmConfig& config) {
  config.validate();
  const Eigen::MatrixXd predictors = dataset.predictors();
  const Eigen::VectorXd response = dataset.response();
  const auto n = static_cast<int>(dataset.rows());

  const auto sampleSize = static_cast<int>(std::llround(config.subsampleFraction * n));
  if (sampleSize < 2 * config.minObsLeaf) throw SubsampleTooSmall(sampleSize, 2L * config.minObsLeaf);

  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += response(i);
  const double baseline = sum / static_cast<double>(n);

  Eigen::VectorXd fitted = Eigen::VectorXd::Constant(n, baseline);
  const TreeConfig treeConfig{config.maxLeaves, config.minObsLeaf};

  auto traceMse = [&]() {
    double sse = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d = response(i) - fitted(i);
      sse += d * d;
    }
    return sse / static_cast<double>(n);
  };

  std::vector<TracePoint> trace;
  trace.push_back({0, traceMse()});

  std::vector<RegressionTree> trees;
  trees.reserve(static_cast<std::size_t>(config.nTrees));
  Eigen::VectorXd residuals(n);

  for (int m = 1; m <= config.nTrees; ++m) {
    SplitMix64 rng = streamFor(config.seed, {stream::kSubsample, static_cast<std::uint64_t>(m)});
    const std::vector<int> rows = sampleWithoutReplacement(n, sampleSize, rng);

    residuals = response - fitted;
    RegressionTree tree = growTree(predictors, residuals, rows, treeConfig);
    tree.scaleLeafValues(config.learnRate);
    for (int i = 0; i < n; ++i) fitted(i) += tree.predictRow(predictors.row(i));
    trees.push_back(std::move(tree));

    if (m % config.mseTraceStride == 0 || m == config.nTrees) trace.push_back({m, traceMse()});
  }

  return GbmModel(baseline, std::move(trees), config, std::move(trace), dataset.predictorNames());
}

double meanSquaredError(const GbmModel& model, const Dataset& dataset) {
  const Eigen::MatrixXd predictors = dataset.predictors();
  const Eigen::VectorXd response = dataset.response();
  double sse = 0.0;
  for (Eigen::Index i = 0; i < dataset.rows(); ++i) {
    const double d = response(i) - model.predictRow(predictors.row(i));
    sse += d * d;
  }
  return sse / static_cast<double>(dataset.rows());
}

double rSquared(const GbmModel& model, const Dataset& dataset) {
  const Eigen::MatrixXd predictors = dataset.predictors();
  const Eigen::VectorXd response = dataset.response();
  const double mean = response.mean();
  double sse = 0.0;
  double sst = 0.0;
  for (Eigen::Index i = 0; i < dataset.rows(); ++i) {
    const double e = response(i) - model.predictRow(predictors.row(i));
    const double d = response(i) - mean;
    sse += e * e;
    sst += d * d;
  }
  if (sst == 0.0) throw ZeroVarianceResponse();
  return 1.0 - sse / sst;
}

}  // namespace relimp
