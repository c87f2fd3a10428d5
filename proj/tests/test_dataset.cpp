#include "doctest.h"

#include <Eigen/Dense>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "relimp/dataset.hpp"
#include "relimp/errors.hpp"

using namespace relimp;

namespace {

std::string writeTemp(const std::string& name, const std::string& content) {
  const std::string path = "/tmp/relimp_test_" + name;
  std::ofstream out(path);
  out << content;
  return path;
}

}  // namespace

TEST_SUITE("dataset") {

TEST_CASE("loadCsv reads labels, values and NA cells") {
  const std::string path = writeTemp("basic.csv",
                                     "period,a,b,y\n"
                                     "FY01,1.5,2,10\n"
                                     "FY02,NA,4,20\n"
                                     "FY03,3.5,,30\n");
  const Dataset data = loadCsv(path, "y");
  CHECK(data.rows() == 3);
  CHECK(data.cols() == 3);
  CHECK(data.predictorCount() == 2);
  CHECK(data.responseName() == "y");
  CHECK(data.rowLabels() == std::vector<std::string>{"FY01", "FY02", "FY03"});
  CHECK(data.values()(0, 0) == 1.5);
  CHECK(isMissing(data.values()(1, 0)));
  CHECK(isMissing(data.values()(2, 1)));  // empty cell, same as NA
  CHECK(data.response()(2) == 30.0);
  std::remove(path.c_str());
}

TEST_CASE("loadCsv rejects bad inputs with typed errors") {
  const std::string missing = writeTemp("missing_resp.csv", "a,b\n1,2\n");
  CHECK_THROWS_AS(loadCsv(missing, "y"), MissingResponseColumn);

  const std::string naResp = writeTemp("na_resp.csv", "a,y\n1,2\n3,NA\n");
  try {
    loadCsv(naResp, "y");
    FAIL("expected MissingInResponse");
  } catch (const MissingInResponse& e) {
    CHECK(e.row == 1);
  }

  const std::string garbage = writeTemp("garbage.csv", "a,y\n1,2\nfoo,3\n");
  try {
    loadCsv(garbage, "y");
    FAIL("expected UnparseableCell");
  } catch (const UnparseableCell& e) {
    CHECK(e.row == 1);
    CHECK(e.col == 0);
  }

  const std::string dup = writeTemp("dup.csv", "a,a,y\n1,2,3\n4,5,6\n");
  CHECK_THROWS_AS(loadCsv(dup, "y"), DuplicateColumnName);

  for (const auto* p : {"missing_resp.csv", "na_resp.csv", "garbage.csv", "dup.csv"})
    std::remove(("/tmp/relimp_test_" + std::string(p)).c_str());
}

TEST_CASE("saveCsv round-trips values bit for bit") {
  const std::string path = writeTemp("rt_in.csv",
                                     "period,a,b,y\n"
                                     "r1,0.1,-2.25,10\n"
                                     "r2,NA,0.30000000000000004,20\n"
                                     "r3,1e-12,4,30\n");
  const Dataset first = loadCsv(path, "y");
  const std::string out = "/tmp/relimp_test_rt_out.csv";
  saveCsv(first, out);
  const Dataset second = loadCsv(out, "y");
  REQUIRE(second.rows() == first.rows());
  REQUIRE(second.cols() == first.cols());
  CHECK(second.columnNames() == first.columnNames());
  CHECK(second.rowLabels() == first.rowLabels());
  for (Eigen::Index i = 0; i < first.rows(); ++i)
    for (Eigen::Index j = 0; j < first.cols(); ++j) {
      if (isMissing(first.values()(i, j)))
        CHECK(isMissing(second.values()(i, j)));
      else
        CHECK(second.values()(i, j) == first.values()(i, j));
    }
  std::remove(path.c_str());
  std::remove(out.c_str());
}

TEST_CASE("columnStats skips missing entries") {
  const Dataset data({"x", "y"},
                     (Eigen::MatrixXd(4, 2) << 1.0, 0.0, missingValue(), 0.0, 3.0, 0.0, 4.0, 0.0)
                         .finished(),
                     1);
  const ColumnStats stats = columnStats(data, 0);
  CHECK(stats.mean == doctest::Approx(8.0 / 3.0));
  CHECK(stats.min == 1.0);
  CHECK(stats.max == 4.0);
  CHECK(stats.missingCount == 1);
  CHECK(stats.stdDev == doctest::Approx(std::sqrt((1.0 / 2.0) * (25.0 / 9.0 + 1.0 / 9.0 + 16.0 / 9.0))));
}

TEST_CASE("withPredictors keeps order and the response") {
  const Dataset data({"a", "b", "c", "y"}, Eigen::MatrixXd::Random(5, 4), 3);
  const Dataset cut = data.withPredictors({"c", "a"});
  CHECK(cut.predictorNames() == std::vector<std::string>{"c", "a"});
  CHECK(cut.responseName() == "y");
  CHECK((cut.predictors().col(0).array() == data.values().col(2).array()).all());
  CHECK((cut.predictors().col(1).array() == data.values().col(0).array()).all());
  CHECK_THROWS_AS(data.withPredictors({"nope"}), UnknownFeature);
}

TEST_CASE("requirePredictorsMatch distinguishes count and name errors") {
  const Dataset data({"a", "b", "y"}, Eigen::MatrixXd::Random(4, 3), 2);
  CHECK_NOTHROW(requirePredictorsMatch(data, {"a", "b"}));
  CHECK_THROWS_AS(requirePredictorsMatch(data, {"a"}), ArityMismatch);
  CHECK_THROWS_AS(requirePredictorsMatch(data, {"a", "c"}), UnknownFeature);
}

TEST_CASE("yoyTransform computes percent changes") {
  CHECK(yoyTransform({100.0, 110.0}) == std::vector<double>{10.0});
  CHECK(yoyTransform({50.0, 50.0, 50.0}) == std::vector<double>{0.0, 0.0});
  try {
    yoyTransform({100.0, 0.0, 50.0});
    FAIL("expected DivisionByZero");
  } catch (const DivisionByZero& e) {
    CHECK(e.position == 1);
  }
  CHECK_THROWS_AS(yoyTransform({1.0}), TooShort);
}

TEST_CASE("standardize rescales predictors and leaves the response alone") {
  const std::string path = writeTemp("std.csv",
                                     "a,b,y\n"
                                     "1,5,100\n"
                                     "3,NA,200\n"
                                     "5,9,300\n");
  const Dataset data = loadCsv(path, "y");
  const Dataset scaled = standardize(data);

  // Two observed values standardize to +-1/sqrt(2) under the sample convention.
  CHECK(scaled.values()(0, 1) == doctest::Approx(-0.7071067811865475).epsilon(1e-12));
  CHECK(scaled.values()(2, 1) == doctest::Approx(0.7071067811865475).epsilon(1e-12));
  CHECK(isMissing(scaled.values()(1, 1)));

  CHECK(scaled.values()(0, 0) == doctest::Approx(-1.0));
  CHECK(scaled.values()(1, 0) == doctest::Approx(0.0));
  CHECK(scaled.values()(2, 0) == doctest::Approx(1.0));
  CHECK((scaled.response().array() == data.response().array()).all());

  const Dataset withResp = standardize(data, true);
  CHECK(withResp.response()(0) == doctest::Approx(-1.0));

  // Standardizing twice is a no-op up to roundoff.
  const Dataset twice = standardize(scaled);
  for (Eigen::Index i = 0; i < scaled.rows(); ++i)
    for (Eigen::Index j = 0; j + 1 < scaled.cols(); ++j) {
      if (isMissing(scaled.values()(i, j))) continue;
      CHECK(twice.values()(i, j) == doctest::Approx(scaled.values()(i, j)).epsilon(1e-12));
    }
  std::remove(path.c_str());
}

TEST_CASE("standardize refuses constant predictors") {
  const Dataset data({"flat", "y"},
                     (Eigen::MatrixXd(3, 2) << 2.0, 1.0, 2.0, 2.0, 2.0, 3.0).finished(), 1);
  try {
    standardize(data);
    FAIL("expected ZeroVariance");
  } catch (const ZeroVariance& e) {
    CHECK(e.column == "flat");
  }
}

}  // TEST_SUITE
