#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

namespace relimp {

// One executed (or candidate) split. `improvement` is the reduction in sum of
// squared errors it achieved on the rows it was searched over, in response^2
// units. Rows with a missing feature value follow `missingGoesLeft`.
struct SplitRecord {
  int featureIndex = -1;
  double threshold = 0.0;
  double improvement = 0.0;
  bool missingGoesLeft = true;
};

struct SplitCandidate {
  double threshold = 0.0;
  double improvement = 0.0;
  bool missingGoesLeft = true;
};

struct TreeConfig {
  int maxLeaves = 6;
  int minObsLeaf = 3;
};

// Flat node storage; node 0 is the root. Internal nodes carry a SplitRecord,
// leaves carry (value, count).
struct TreeNode {
  SplitRecord split;
  double value = 0.0;
  int count = 0;
  int left = -1;
  int right = -1;
  bool isLeaf() const { return left < 0; }
};

// Least-squares regression tree. Immutable once handed out by growTree, except
// for the one assembly-time hook the boosting loop uses to fold in shrinkage.
class RegressionTree {
 public:
  RegressionTree() = default;
  explicit RegressionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  int leafCount() const;
  int splitCount() const;

  // Routes one predictor row (missing values as NaN) to its leaf value.
  // Comparison convention: value <= threshold goes left.
  double predictRow(const Eigen::Ref<const Eigen::RowVectorXd>& row) const;

  // Multiplies every leaf value by `factor` (shrinkage fold-in during fitting).
  void scaleLeafValues(double factor);

 private:
  std::vector<TreeNode> nodes_;
};

// Best least-squares split of `rows` on one feature column. Candidate
// thresholds are midpoints of consecutive distinct non-missing values; rows
// with a missing feature value are assigned to whichever side improves more
// (ties keep them left). Both children must hold at least minObsLeaf rows.
// Empty when no legal candidate exists or the best improvement is <= 0.
std::optional<SplitCandidate> bestSplit(const Eigen::Ref<const Eigen::VectorXd>& feature,
                                        const Eigen::Ref<const Eigen::VectorXd>& targets,
                                        const std::vector<int>& rows, int minObsLeaf);

// Grows a tree best-first: repeatedly splits the frontier leaf whose best split
// has the globally largest improvement, until maxLeaves leaves exist or no leaf
// has a positive-improvement legal split. Ties in improvement are broken by
// lowest feature index, then lowest threshold; across frontier leaves, by
// creation order. Leaf value is the mean of its targets.
RegressionTree growTree(const Eigen::Ref<const Eigen::MatrixXd>& predictors,
                        const Eigen::Ref<const Eigen::VectorXd>& targets, std::vector<int> rows,
                        const TreeConfig& config);

}  // namespace relimp
