#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "relimp/dataset.hpp"

namespace relimp {

// Full OLS-with-intercept summary over the complete (listwise-deleted) rows.
// All per-feature vectors align with `features`, which follows predictor order.
struct RegressionSummary {
  std::vector<std::string> features;
  Eigen::VectorXd coefficients;  // response units per feature unit
  double intercept = 0.0;
  Eigen::VectorXd stdErrors;
  Eigen::VectorXd tStats;
  Eigen::VectorXd pValues;     // two-sided, Student-t with nUsed - p - 1 df
  Eigen::VectorXd betaWeights; // coefficient * std(x) / std(y)
  Eigen::VectorXd zeroOrderR;  // Pearson correlation with the response
  double rSquared = 0.0;
  long nUsed = 0;
  std::vector<long> droppedRows;  // original row indices removed by listwise deletion
};

// Average R-squared gain a feature brings across all submodel sizes.
struct DominanceResult {
  std::vector<std::string> features;
  Eigen::VectorXd generalDominance;  // sums to fullRSquared
  long nSubmodels = 0;               // 2^p - 1
  double fullRSquared = 0.0;
};

// Johnson-style relative weights via symmetric (singular-value) orthogonalization.
struct RelativeWeightsResult {
  std::vector<std::string> features;
  Eigen::VectorXd epsilons;  // R-squared units, sums to fullRSquared
  double fullRSquared = 0.0;
};

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incompleteBetaReg(double a, double b, double x);

// CDF of Student's t with df degrees of freedom.
double studentTCdf(double t, double df);

// Two-sided p-value for a t statistic: 2 * P(T <= -|t|).
double twoSidedPValue(double t, double df);

// Least squares with intercept after dropping every row with a missing cell.
// Requires more complete rows than coefficients and a full-rank design.
RegressionSummary olsFit(const Dataset& dataset);

// R-squared(full model) minus R-squared(model without `feature`), both fitted
// on the full model's complete-row set, so the difference is never negative.
double usefulness(const Dataset& dataset, const std::string& feature);

// General dominance: for each feature, the increase in R-squared from adding
// it is averaged within every subset size, then across sizes. Enumerates all
// 2^p - 1 submodels; refuses more than 20 predictors.
DominanceResult dominanceAnalysis(const Dataset& dataset);

// Relative weights: standardized predictors X = U S V^T are replaced by the
// closest orthonormal matrix Z = U V^T; each feature's epsilon distributes the
// full R-squared through the squared X-on-Z loadings.
RelativeWeightsResult relativeWeights(const Dataset& dataset);

// Features with p-value strictly below alpha, in original predictor order.
std::vector<std::string> significantFeatures(const RegressionSummary& summary, double alpha);

}  // namespace relimp
