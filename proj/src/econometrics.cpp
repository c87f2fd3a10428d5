#include "relimp/econometrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>

#include "relimp/errors.hpp"

namespace relimp {

namespace {

constexpr double kBetaEps = 3e-16;
constexpr double kTiny = 1e-300;

// Continued fraction for the incomplete beta (modified Lentz).
double betaContinuedFraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 300; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kBetaEps) break;
  }
  return h;
}

// Rows with any missing cell removed; predictors and response side by side.
struct CompleteRows {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  std::vector<long> dropped;
};

CompleteRows completeRows(const Dataset& dataset) {
  const Eigen::MatrixXd predictors = dataset.predictors();
  const Eigen::VectorXd response = dataset.response();
  std::vector<Eigen::Index> keep;
  CompleteRows out;
  for (Eigen::Index r = 0; r < predictors.rows(); ++r) {
    bool complete = true;
    for (Eigen::Index c = 0; c < predictors.cols(); ++c)
      if (isMissing(predictors(r, c))) {
        complete = false;
        break;
      }
    if (complete)
      keep.push_back(r);
    else
      out.dropped.push_back(static_cast<long>(r));
  }
  out.x.resize(static_cast<Eigen::Index>(keep.size()), predictors.cols());
  out.y.resize(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) {
    out.x.row(static_cast<Eigen::Index>(i)) = predictors.row(keep[i]);
    out.y(static_cast<Eigen::Index>(i)) = response(keep[i]);
  }
  return out;
}

void requireEnoughRows(const CompleteRows& data) {
  const long needed = static_cast<long>(data.x.cols()) + 1;
  if (static_cast<long>(data.x.rows()) <= needed)
    throw InsufficientRows(static_cast<long>(data.x.rows()), needed);
}

double sampleStd(const Eigen::VectorXd& v) {
  const double mean = v.mean();
  const double ss = (v.array() - mean).square().sum();
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

// Correlation structure of the complete rows, the workhorse behind subset
// R-squared for usefulness and dominance.
struct CorrelationData {
  Eigen::MatrixXd rxx;  // predictor correlation matrix
  Eigen::VectorXd rxy;  // predictor-response correlations
};

CorrelationData correlations(const CompleteRows& data, const Dataset& dataset) {
  const Eigen::Index n = data.x.rows();
  const Eigen::Index p = data.x.cols();
  Eigen::MatrixXd xs(n, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const double sd = sampleStd(data.x.col(j));
    if (sd == 0.0) throw RankDeficient("predictor '" + dataset.predictorNames()[static_cast<std::size_t>(j)] + "' is constant");
    xs.col(j) = (data.x.col(j).array() - data.x.col(j).mean()) / sd;
  }
  const double sy = sampleStd(data.y);
  if (sy == 0.0) throw ZeroVarianceResponse();
  const Eigen::VectorXd ys = (data.y.array() - data.y.mean()) / sy;

  CorrelationData out;
  out.rxx = xs.transpose() * xs / static_cast<double>(n - 1);
  out.rxy = xs.transpose() * ys / static_cast<double>(n - 1);
  return out;
}

// R-squared of the OLS fit restricted to the predictor subset in `mask`.
double subsetRSquared(const CorrelationData& corr, std::uint32_t mask) {
  if (mask == 0) return 0.0;
  std::vector<Eigen::Index> idx;
  for (Eigen::Index j = 0; j < corr.rxx.cols(); ++j)
    if (mask & (1u << j)) idx.push_back(j);
  const Eigen::Index k = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd sub(k, k);
  Eigen::VectorXd rhs(k);
  for (Eigen::Index a = 0; a < k; ++a) {
    rhs(a) = corr.rxy(idx[static_cast<std::size_t>(a)]);
    for (Eigen::Index b = 0; b < k; ++b)
      sub(a, b) = corr.rxx(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]);
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(sub);
  if (llt.info() != Eigen::Success) throw RankDeficient("singular predictor subset");
  return rhs.dot(llt.solve(rhs));
}

}  // namespace

double incompleteBetaReg(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double logFront = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(logFront);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * betaContinuedFraction(a, b, x) / a;
  return 1.0 - front * betaContinuedFraction(b, a, 1.0 - x) / b;
}

double studentTCdf(double t, double df) {
  if (t == 0.0) return 0.5;
  const double tail = 0.5 * incompleteBetaReg(0.5 * df, 0.5, df / (df + t * t));
  return t > 0.0 ? 1.0 - tail : tail;
}

double twoSidedPValue(double t, double df) {
  const double p = 2.0 * studentTCdf(-std::fabs(t), df);
  return std::clamp(p, 0.0, 1.0);
}

RegressionSummary olsFit(const Dataset& dataset) {
  const CompleteRows data = completeRows(dataset);
  requireEnoughRows(data);
  const Eigen::Index n = data.x.rows();
  const Eigen::Index p = data.x.cols();

  Eigen::MatrixXd design(n, p + 1);
  design.col(0).setOnes();
  design.rightCols(p) = data.x;

  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < p + 1) throw RankDeficient("collinear predictors (rank " +
                                             std::to_string(qr.rank()) + " of " +
                                             std::to_string(p + 1) + ")");
  const Eigen::VectorXd coef = qr.solve(data.y);
  const Eigen::VectorXd residuals = data.y - design * coef;
  const double sse = residuals.squaredNorm();
  const double meanY = data.y.mean();
  const double sst = (data.y.array() - meanY).square().sum();
  if (sst == 0.0) throw ZeroVarianceResponse();

  const double dof = static_cast<double>(n - p - 1);
  const double sigma2 = sse / dof;
  const Eigen::MatrixXd xtxInv =
      (design.transpose() * design).ldlt().solve(Eigen::MatrixXd::Identity(p + 1, p + 1));

  RegressionSummary summary;
  summary.features = dataset.predictorNames();
  summary.intercept = coef(0);
  summary.coefficients = coef.tail(p);
  summary.stdErrors.resize(p);
  summary.tStats.resize(p);
  summary.pValues.resize(p);
  summary.betaWeights.resize(p);
  summary.zeroOrderR.resize(p);
  summary.rSquared = 1.0 - sse / sst;
  summary.nUsed = static_cast<long>(n);
  summary.droppedRows = data.dropped;

  const double stdY = sampleStd(data.y);
  for (Eigen::Index j = 0; j < p; ++j) {
    summary.stdErrors(j) = std::sqrt(sigma2 * xtxInv(j + 1, j + 1));
    summary.tStats(j) = summary.coefficients(j) / summary.stdErrors(j);
    summary.pValues(j) = twoSidedPValue(summary.tStats(j), dof);
    const double stdX = sampleStd(data.x.col(j));
    summary.betaWeights(j) = summary.coefficients(j) * stdX / stdY;
    const double covXY =
        ((data.x.col(j).array() - data.x.col(j).mean()) * (data.y.array() - meanY)).sum() /
        static_cast<double>(n - 1);
    summary.zeroOrderR(j) = stdX == 0.0 ? 0.0 : covXY / (stdX * stdY);
  }
  return summary;
}

double usefulness(const Dataset& dataset, const std::string& feature) {
  const Eigen::Index j = dataset.predictorIndex(feature);
  const CompleteRows data = completeRows(dataset);
  requireEnoughRows(data);
  const Eigen::Index p = data.x.cols();
  if (p > 20) throw TooManyPredictors(static_cast<long>(p));
  const CorrelationData corr = correlations(data, dataset);
  const std::uint32_t full = (p == 32 ? ~0u : (1u << p) - 1u);
  return subsetRSquared(corr, full) - subsetRSquared(corr, full & ~(1u << j));
}

DominanceResult dominanceAnalysis(const Dataset& dataset) {
  const CompleteRows data = completeRows(dataset);
  requireEnoughRows(data);
  const Eigen::Index p = data.x.cols();
  if (p > 20) throw TooManyPredictors(static_cast<long>(p));
  const CorrelationData corr = correlations(data, dataset);

  const std::uint32_t nMasks = 1u << p;
  std::vector<double> r2(nMasks, 0.0);
  for (std::uint32_t mask = 1; mask < nMasks; ++mask) r2[mask] = subsetRSquared(corr, mask);

  DominanceResult result;
  result.features = dataset.predictorNames();
  result.generalDominance = Eigen::VectorXd::Zero(p);
  result.nSubmodels = static_cast<long>(nMasks - 1);
  result.fullRSquared = r2[nMasks - 1];

  for (Eigen::Index j = 0; j < p; ++j) {
    // Mean R-squared gain from adding j, first within each subset size.
    std::vector<double> gain(static_cast<std::size_t>(p), 0.0);
    std::vector<long> count(static_cast<std::size_t>(p), 0);
    for (std::uint32_t mask = 0; mask < nMasks; ++mask) {
      if (mask & (1u << j)) continue;
      const auto size = static_cast<std::size_t>(std::popcount(mask));
      gain[size] += r2[mask | (1u << j)] - r2[mask];
      ++count[size];
    }
    double average = 0.0;
    for (std::size_t size = 0; size < gain.size(); ++size)
      average += gain[size] / static_cast<double>(count[size]);
    result.generalDominance(j) = average / static_cast<double>(p);
  }
  return result;
}

RelativeWeightsResult relativeWeights(const Dataset& dataset) {
  const CompleteRows data = completeRows(dataset);
  requireEnoughRows(data);
  const Eigen::Index n = data.x.rows();
  const Eigen::Index p = data.x.cols();

  Eigen::MatrixXd xs(n, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const double sd = sampleStd(data.x.col(j));
    if (sd == 0.0)
      throw RankDeficient("predictor '" + dataset.predictorNames()[static_cast<std::size_t>(j)] + "' is constant");
    xs.col(j) = (data.x.col(j).array() - data.x.col(j).mean()) / sd;
  }
  const double sy = sampleStd(data.y);
  if (sy == 0.0) throw ZeroVarianceResponse();
  const Eigen::VectorXd ys = (data.y.array() - data.y.mean()) / sy;

  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(xs, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (sv(p - 1) <= sv(0) * 1e-12)
    throw RankDeficient("standardized predictors are collinear");

  // X = U S V^T; Z = U V^T is the nearest orthonormal basis, X = Z * Lambda.
  const Eigen::MatrixXd lambda = svd.matrixV() * sv.asDiagonal() * svd.matrixV().transpose();
  const Eigen::VectorXd b = svd.matrixV() * (svd.matrixU().transpose() * ys);

  const double scale = static_cast<double>(n - 1) * static_cast<double>(n - 1);
  RelativeWeightsResult result;
  result.features = dataset.predictorNames();
  result.epsilons.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    double total = 0.0;
    for (Eigen::Index k = 0; k < p; ++k)
      total += lambda(j, k) * lambda(j, k) * b(k) * b(k);
    result.epsilons(j) = total / scale;
  }
  result.fullRSquared = b.squaredNorm() / static_cast<double>(n - 1);
  return result;
}

std::vector<std::string> significantFeatures(const RegressionSummary& summary, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidConfig("alpha must lie strictly between 0 and 1");
  std::vector<std::string> out;
  for (std::size_t j = 0; j < summary.features.size(); ++j)
    if (summary.pValues(static_cast<Eigen::Index>(j)) < alpha) out.push_back(summary.features[j]);
  return out;
}

}  // namespace relimp
