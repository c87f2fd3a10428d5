#include "doctest.h"

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "relimp/dataset.hpp"
#include "relimp/errors.hpp"
#include "relimp/gbm.hpp"
#include "relimp/importance.hpp"
#include "relimp/rng.hpp"

using namespace relimp;

namespace {

// y depends on x1 alone; x2 is independent noise.
Dataset signalAndNoise(std::uint64_t seed, int n) {
  SplitMix64 rng(seed);
  Eigen::MatrixXd values(n, 3);
  for (int i = 0; i < n; ++i) {
    values(i, 0) = rng.nextUnit() * 10.0;
    values(i, 1) = rng.nextUnit() * 10.0;
    values(i, 2) = values(i, 0) < 5.0 ? 1.0 : 9.0;
  }
  return Dataset({"x1", "x2", "y"}, values, 2);
}

// A staircase in x1 that one tree reproduces exactly: with shrinkage 1 the
// residuals hit zero bit for bit after the first stage, so later stages stump
// and x2 provably never hosts a split. y values are small dyadics on purpose.
Dataset exactStaircase() {
  Eigen::MatrixXd values(20, 3);
  const double level[] = {0.0, 4.0, 10.0, 18.0};
  for (int i = 0; i < 20; ++i) {
    values(i, 0) = static_cast<double>(i / 5);
    values(i, 1) = (i % 2) ? 3.7 : 1.2;
    values(i, 2) = level[i / 5];
  }
  return Dataset({"x1", "x2", "y"}, values, 2);
}

GbmConfig quickConfig() {
  GbmConfig config;
  config.nTrees = 150;
  config.learnRate = 0.1;
  config.subsampleFraction = 1.0;
  config.maxLeaves = 4;
  config.minObsLeaf = 3;
  config.mseTraceStride = 50;
  return config;
}

// Hand-assembled one-split tree for attribution arithmetic.
RegressionTree singleSplitTree(int feature, double improvement, double leftValue,
                               double rightValue) {
  std::vector<TreeNode> nodes(3);
  nodes[0].split = {feature, 5.0, improvement, true};
  nodes[0].left = 1;
  nodes[0].right = 2;
  nodes[1].value = leftValue;
  nodes[1].count = 1;
  nodes[2].value = rightValue;
  nodes[2].count = 1;
  return RegressionTree(std::move(nodes));
}

}  // namespace

TEST_SUITE("importance") {

TEST_CASE("an unused feature scores zero on every method") {
  const Dataset data = exactStaircase();
  GbmConfig config;
  config.nTrees = 4;
  config.learnRate = 1.0;
  config.subsampleFraction = 1.0;
  config.maxLeaves = 6;
  config.minObsLeaf = 3;
  const GbmModel model = fitGbm(data, config);

  const ImportanceReport freq = selectionFrequency(model);
  const ImportanceReport split = splitImportance(model);
  const ImportanceReport perm = permutationImportance(model, data, PermutationMetric::mse, 5, 42);

  REQUIRE(freq.scores.size() == 2);
  CHECK(freq.scores[0].feature == "x1");
  CHECK(freq.scores[0].scaled == 100.0);
  CHECK(split.scores[0].scaled == 100.0);
  CHECK(perm.scores[0].scaled == 100.0);

  // The staircase never routes through x2, so the zeros are exact, and
  // shuffling a column the trees ignore cannot move the error metric.
  CHECK(freq.scores[1].raw == 0.0);
  CHECK(split.scores[1].raw == 0.0);
  CHECK(perm.scores[1].raw == 0.0);
  CHECK(perm.scores[1].scaled == 0.0);

  // The first stage absorbs the whole signal; the remaining stages stump.
  CHECK(freq.scores[0].raw == 3.0);
}

TEST_CASE("split importance is the improvement sum divided by the tree count") {
  const Dataset data = signalAndNoise(2, 80);
  GbmConfig config = quickConfig();
  config.nTrees = 7;
  const GbmModel model = fitGbm(data, config);

  double sums[2] = {0.0, 0.0};
  int counts[2] = {0, 0};
  for (const auto& tree : model.trees())
    for (const auto& node : tree.nodes())
      if (!node.isLeaf()) {
        sums[node.split.featureIndex] += node.split.improvement;
        ++counts[node.split.featureIndex];
      }

  const ImportanceReport split = splitImportance(model);
  const ImportanceReport freq = selectionFrequency(model);
  for (int j = 0; j < 2; ++j) {
    CHECK(split.scores[static_cast<std::size_t>(j)].raw ==
          doctest::Approx(sums[j] / 7.0).epsilon(1e-12));
    CHECK(freq.scores[static_cast<std::size_t>(j)].raw == static_cast<double>(counts[j]));
  }
}

TEST_CASE("scaled scores put the maximum at exactly 100 and share ties") {
  // Improvements divide evenly by the three trees (raws 2, 2, 0.5), so the
  // 100 * raw / max rescale is exact and the tie is shared bit for bit.
  const GbmModel model(0.0,
                       {singleSplitTree(0, 6.0, -1.0, 1.0), singleSplitTree(1, 6.0, -1.0, 1.0),
                        singleSplitTree(2, 1.5, -0.5, 0.5)},
                       GbmConfig{}, {}, {"a", "b", "c"});
  const ImportanceReport split = splitImportance(model);
  CHECK(split.scores[0].scaled == 100.0);
  CHECK(split.scores[1].scaled == 100.0);
  CHECK(split.scores[2].scaled == 25.0);
}

TEST_CASE("importance on a splitless model is refused") {
  Eigen::MatrixXd values(10, 2);
  for (int i = 0; i < 10; ++i) {
    values(i, 0) = i;
    values(i, 1) = 7.0;  // constant response, no tree ever splits
  }
  const Dataset data({"x", "y"}, values, 1);
  GbmConfig config = quickConfig();
  config.nTrees = 3;
  const GbmModel model = fitGbm(data, config);
  CHECK_THROWS_AS(selectionFrequency(model), NoSplitsInModel);
  CHECK_THROWS_AS(splitImportance(model), NoSplitsInModel);

  // Permutation is model-agnostic: shuffling changes nothing, scores stay 0.
  const ImportanceReport perm = permutationImportance(model, data, PermutationMetric::mse, 3, 1);
  CHECK(perm.scores[0].raw == 0.0);
  CHECK(perm.scores[0].scaled == 0.0);
}

TEST_CASE("permutation importance is reproducible and seed-sensitive") {
  const Dataset data = signalAndNoise(3, 100);
  const GbmModel model = fitGbm(data, quickConfig());
  const ImportanceReport a = permutationImportance(model, data, PermutationMetric::mse, 8, 7);
  const ImportanceReport b = permutationImportance(model, data, PermutationMetric::mse, 8, 7);
  const ImportanceReport c = permutationImportance(model, data, PermutationMetric::mse, 8, 8);
  REQUIRE(a.scores.size() == b.scores.size());
  for (std::size_t j = 0; j < a.scores.size(); ++j) CHECK(a.scores[j].raw == b.scores[j].raw);
  bool anyDiff = false;
  for (std::size_t j = 0; j < a.scores.size(); ++j)
    anyDiff = anyDiff || a.scores[j].raw != c.scores[j].raw;
  CHECK(anyDiff);
  CHECK(a.metric == PermutationMetric::mse);
  CHECK(a.nShuffles == 8);
  CHECK(a.seed == 7);
}

TEST_CASE("the rmse metric rescales but keeps the leader") {
  const Dataset data = signalAndNoise(4, 100);
  const GbmModel model = fitGbm(data, quickConfig());
  const ImportanceReport mse = permutationImportance(model, data, PermutationMetric::mse, 5, 11);
  const ImportanceReport rmse = permutationImportance(model, data, PermutationMetric::rmse, 5, 11);
  CHECK(mse.scores[0].scaled == 100.0);
  CHECK(rmse.scores[0].scaled == 100.0);
  CHECK(mse.scores[0].raw != rmse.scores[0].raw);
}

TEST_CASE("permutation requires at least one shuffle and matching features") {
  const Dataset data = signalAndNoise(5, 60);
  const GbmModel model = fitGbm(data, quickConfig());
  CHECK_THROWS_AS(permutationImportance(model, data, PermutationMetric::mse, 0, 1),
                  InvalidConfig);
  const Dataset renamed({"x1", "z", "y"}, data.values(), 2);
  CHECK_THROWS_AS(permutationImportance(model, renamed, PermutationMetric::mse, 3, 1),
                  UnknownFeature);
}

TEST_CASE("method names serialize for reports") {
  CHECK(std::string(toString(ImportanceMethod::frequency)) == "frequency");
  CHECK(std::string(toString(ImportanceMethod::split)) == "split");
  CHECK(std::string(toString(ImportanceMethod::permutation)) == "permutation");
  CHECK(std::string(toString(PermutationMetric::mse)) == "mse");
  CHECK(std::string(toString(PermutationMetric::rmse)) == "rmse");
}

}  // TEST_SUITE
