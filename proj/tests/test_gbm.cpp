#include "doctest.h"

#include <Eigen/Dense>
#include <vector>

#include "relimp/dataset.hpp"
#include "relimp/errors.hpp"
#include "relimp/gbm.hpp"
#include "relimp/rng.hpp"
#include "relimp/tree.hpp"

using namespace relimp;

namespace {

Dataset randomDataset(std::uint64_t seed, int n, int p) {
  SplitMix64 rng(seed);
  Eigen::MatrixXd values(n, p + 1);
  std::vector<std::string> names;
  for (int j = 0; j < p; ++j) names.push_back("x" + std::to_string(j + 1));
  names.push_back("y");
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) values(i, j) = rng.nextUnit() * 10.0;
    values(i, p) = 2.0 * values(i, 0) - values(i, std::min(1, p - 1)) + rng.nextUnit();
  }
  return Dataset(names, values, p);
}

GbmConfig smallConfig() {
  GbmConfig config;
  config.nTrees = 120;
  config.learnRate = 0.1;
  config.subsampleFraction = 1.0;
  config.maxLeaves = 4;
  config.minObsLeaf = 3;
  config.seed = 42;
  config.mseTraceStride = 10;
  return config;
}

}  // namespace

TEST_SUITE("gbm") {

TEST_CASE("a constant response fits as the baseline alone") {
  Eigen::MatrixXd values(8, 2);
  for (int i = 0; i < 8; ++i) {
    values(i, 0) = i;
    values(i, 1) = 3.25;
  }
  const Dataset data({"x", "y"}, values, 1);
  GbmConfig config = smallConfig();
  config.nTrees = 5;
  const GbmModel model = fitGbm(data, config);
  CHECK(model.baseline() == 3.25);
  CHECK(model.totalSplitCount() == 0);
  const Eigen::VectorXd fit = model.predict(data.predictors());
  for (int i = 0; i < 8; ++i) CHECK(fit(i) == 3.25);
}

TEST_CASE("one unshrunk full-sample stage equals baseline plus a single tree") {
  const Dataset data = randomDataset(1, 40, 3);
  GbmConfig config;
  config.nTrees = 1;
  config.learnRate = 1.0;
  config.subsampleFraction = 1.0;
  config.maxLeaves = 6;
  config.minObsLeaf = 3;
  const GbmModel model = fitGbm(data, config);

  const Eigen::VectorXd y = data.response();
  // Plain running-sum mean, the definition the baseline promises. Eigen's
  // .mean() reduces in SIMD packets, whose low bits can differ.
  double baseline = 0.0;
  for (int i = 0; i < 40; ++i) baseline += y(i);
  baseline /= 40.0;
  const Eigen::VectorXd centered = (y.array() - baseline).matrix();
  std::vector<int> rows;
  for (int i = 0; i < 40; ++i) rows.push_back(i);
  const RegressionTree reference =
      growTree(data.predictors(), centered, rows, {config.maxLeaves, config.minObsLeaf});

  CHECK(model.baseline() == baseline);
  for (int i = 0; i < 40; ++i) {
    const double expected = baseline + reference.predictRow(data.predictors().row(i));
    CHECK(model.predictRow(data.predictors().row(i)) == expected);  // bitwise
  }
}

TEST_CASE("refits are bit-identical") {
  const Dataset data = randomDataset(2, 30, 3);
  const GbmConfig config = smallConfig();
  const GbmModel a = fitGbm(data, config);
  const GbmModel b = fitGbm(data, config);
  const Eigen::VectorXd fitA = a.predict(data.predictors());
  const Eigen::VectorXd fitB = b.predict(data.predictors());
  for (int i = 0; i < 30; ++i) CHECK(fitA(i) == fitB(i));
  REQUIRE(a.mseTrace().size() == b.mseTrace().size());
  for (std::size_t k = 0; k < a.mseTrace().size(); ++k)
    CHECK(a.mseTrace()[k].mse == b.mseTrace()[k].mse);
}

TEST_CASE("different seeds change the subsampled fit") {
  const Dataset data = randomDataset(3, 30, 3);
  GbmConfig config = smallConfig();
  config.subsampleFraction = 0.7;
  GbmConfig other = config;
  other.seed = 43;
  const Eigen::VectorXd fitA = fitGbm(data, config).predict(data.predictors());
  const Eigen::VectorXd fitB = fitGbm(data, other).predict(data.predictors());
  CHECK((fitA - fitB).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("full-sample training error never increases") {
  const Dataset data = randomDataset(4, 50, 4);
  GbmConfig config = smallConfig();
  config.nTrees = 200;
  config.mseTraceStride = 1;
  const GbmModel model = fitGbm(data, config);
  const auto& trace = model.mseTrace();
  REQUIRE(trace.size() == 201);
  for (std::size_t k = 1; k < trace.size(); ++k)
    CHECK(trace[k].mse <= trace[k - 1].mse * (1.0 + 1e-12) + 1e-15);
}

TEST_CASE("the trace covers start, stride points and the final iteration") {
  const Dataset data = randomDataset(5, 25, 2);
  GbmConfig config = smallConfig();
  config.nTrees = 25;  // not a stride multiple
  config.mseTraceStride = 10;
  const GbmModel model = fitGbm(data, config);
  std::vector<int> iterations;
  for (const auto& pt : model.mseTrace()) iterations.push_back(pt.iteration);
  CHECK(iterations == std::vector<int>{0, 10, 20, 25});

  const double variance =
      (data.response().array() - data.response().mean()).square().mean();
  CHECK(model.mseTrace().front().mse == doctest::Approx(variance));
  CHECK(model.mseTrace().back().mse == doctest::Approx(meanSquaredError(model, data)));
}

TEST_CASE("rSquared ties out against the trace") {
  const Dataset data = randomDataset(6, 40, 3);
  const GbmModel model = fitGbm(data, smallConfig());
  const double variance =
      (data.response().array() - data.response().mean()).square().mean();
  CHECK(rSquared(model, data) ==
        doctest::Approx(1.0 - meanSquaredError(model, data) / variance));
}

TEST_CASE("config validation rejects out-of-range values") {
  const Dataset data = randomDataset(7, 20, 2);
  GbmConfig config = smallConfig();
  config.nTrees = 0;
  CHECK_THROWS_AS(fitGbm(data, config), InvalidConfig);
  config = smallConfig();
  config.learnRate = 0.0;
  CHECK_THROWS_AS(fitGbm(data, config), InvalidConfig);
  config = smallConfig();
  config.learnRate = 1.5;
  CHECK_THROWS_AS(fitGbm(data, config), InvalidConfig);
  config = smallConfig();
  config.subsampleFraction = 0.0;
  CHECK_THROWS_AS(fitGbm(data, config), InvalidConfig);
  config = smallConfig();
  config.subsampleFraction = 1.1;
  CHECK_THROWS_AS(fitGbm(data, config), InvalidConfig);
  config = smallConfig();
  config.maxLeaves = 0;
  CHECK_THROWS_AS(fitGbm(data, config), InvalidConfig);
  config = smallConfig();
  config.mseTraceStride = 0;
  CHECK_THROWS_AS(fitGbm(data, config), InvalidConfig);
}

TEST_CASE("a subsample too small to split is refused") {
  const Dataset data = randomDataset(8, 6, 2);
  GbmConfig config = smallConfig();
  config.subsampleFraction = 0.5;  // 3 rows per stage, but a split needs 6
  CHECK_THROWS_AS(fitGbm(data, config), SubsampleTooSmall);
}

TEST_CASE("prediction arity is checked") {
  const Dataset data = randomDataset(9, 20, 3);
  const GbmModel model = fitGbm(data, smallConfig());
  Eigen::RowVectorXd narrow(2);
  narrow << 1.0, 2.0;
  CHECK_THROWS_AS(model.predictRow(narrow), ArityMismatch);
}

TEST_CASE("feature names ride along with the model") {
  const Dataset data = randomDataset(10, 20, 2);
  const GbmModel model = fitGbm(data, smallConfig());
  CHECK(model.featureNames() == data.predictorNames());
}

}  // TEST_SUITE
