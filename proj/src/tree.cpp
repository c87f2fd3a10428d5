#include "relimp/tree.hpp"

#include <algorithm>
#include <cmath>

#include "relimp/dataset.hpp"
#include "relimp/errors.hpp"

namespace relimp {

int RegressionTree::leafCount() const {
  int n = 0;
  for (const auto& node : nodes_) n += node.isLeaf() ? 1 : 0;
  return n;
}

int RegressionTree::splitCount() const {
  return static_cast<int>(nodes_.size()) - leafCount();
}

double RegressionTree::predictRow(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
  int idx = 0;
  while (!nodes_[static_cast<std::size_t>(idx)].isLeaf()) {
    const TreeNode& node = nodes_[static_cast<std::size_t>(idx)];
    const double v = row(node.split.featureIndex);
    const bool goLeft = isMissing(v) ? node.split.missingGoesLeft : v <= node.split.threshold;
    idx = goLeft ? node.left : node.right;
  }
  return nodes_[static_cast<std::size_t>(idx)].value;
}

void RegressionTree::scaleLeafValues(double factor) {
  for (auto& node : nodes_) {
    if (node.isLeaf()) node.value *= factor;
  }
}

std::optional<SplitCandidate> bestSplit(const Eigen::Ref<const Eigen::VectorXd>& feature,
                                        const Eigen::Ref<const Eigen::VectorXd>& targets,
                                        const std::vector<int>& rows, int minObsLeaf) {
  // Sorted (value, row) pairs over the observed rows; missing rows pooled.
  std::vector<std::pair<double, int>> observed;
  observed.reserve(rows.size());
  double missingSum = 0.0;
  int missingCount = 0;
  for (int r : rows) {
    const double v = feature(r);
    if (isMissing(v)) {
      missingSum += targets(r);
      ++missingCount;
    } else {
      observed.emplace_back(v, r);
    }
  }
  if (observed.size() < 2) return std::nullopt;
  std::sort(observed.begin(), observed.end());

  const auto total = static_cast<int>(rows.size());
  double totalSum = missingSum;
  for (const auto& [v, r] : observed) totalSum += targets(r);
  const double parentTerm = totalSum * totalSum / static_cast<double>(total);

  std::optional<SplitCandidate> best;
  double prefixSum = 0.0;
  int prefixCount = 0;
  for (std::size_t i = 0; i + 1 < observed.size(); ++i) {
    prefixSum += targets(observed[i].second);
    ++prefixCount;
    if (observed[i].first == observed[i + 1].first) continue;  // not a boundary
    const double threshold = observed[i].first + 0.5 * (observed[i + 1].first - observed[i].first);
    // Try missing-left first so an exact tie keeps the left convention.
    for (int side = 0; side < (missingCount > 0 ? 2 : 1); ++side) {
      const bool missingLeft = side == 0;
      const int nLeft = prefixCount + (missingLeft ? missingCount : 0);
      const int nRight = total - nLeft;
      if (nLeft < minObsLeaf || nRight < minObsLeaf) continue;
      const double sumLeft = prefixSum + (missingLeft ? missingSum : 0.0);
      const double sumRight = totalSum - sumLeft;
      const double improvement = sumLeft * sumLeft / static_cast<double>(nLeft) +
                                 sumRight * sumRight / static_cast<double>(nRight) - parentTerm;
      if (!best || improvement > best->improvement)
        best = SplitCandidate{threshold, improvement, missingLeft};
    }
  }
  if (!best || !(best->improvement > 0.0)) return std::nullopt;
  return best;
}

namespace {

struct FrontierEntry {
  int nodeIndex = -1;
  int featureIndex = -1;
  SplitCandidate candidate;
  bool splittable = false;
};

struct LeafRows {
  int nodeIndex;
  std::vector<int> rows;
};

// Best split of one leaf across all features; ties broken by lowest feature
// index (bestSplit already broke threshold ties within a feature).
FrontierEntry searchLeaf(const Eigen::Ref<const Eigen::MatrixXd>& predictors,
                         const Eigen::Ref<const Eigen::VectorXd>& targets,
                         const std::vector<int>& rows, int nodeIndex, const TreeConfig& config) {
  FrontierEntry entry;
  entry.nodeIndex = nodeIndex;
  if (static_cast<int>(rows.size()) < 2 * config.minObsLeaf) return entry;
  for (int f = 0; f < static_cast<int>(predictors.cols()); ++f) {
    auto candidate = bestSplit(predictors.col(f), targets, rows, config.minObsLeaf);
    if (!candidate) continue;
    if (!entry.splittable || candidate->improvement > entry.candidate.improvement) {
      entry.splittable = true;
      entry.featureIndex = f;
      entry.candidate = *candidate;
    }
  }
  return entry;
}

double meanOf(const Eigen::Ref<const Eigen::VectorXd>& targets, const std::vector<int>& rows) {
  double sum = 0.0;
  for (int r : rows) sum += targets(r);
  return sum / static_cast<double>(rows.size());
}

}  // namespace

RegressionTree growTree(const Eigen::Ref<const Eigen::MatrixXd>& predictors,
                        const Eigen::Ref<const Eigen::VectorXd>& targets, std::vector<int> rows,
                        const TreeConfig& config) {
  if (config.maxLeaves < 1 || config.minObsLeaf < 1) throw InvalidConfig("maxLeaves and minObsLeaf must be >= 1");
  if (rows.empty()) throw EmptyRowSet();
  if (static_cast<int>(rows.size()) < config.minObsLeaf)
    throw InvalidConfig("row set smaller than minObsLeaf");
  std::sort(rows.begin(), rows.end());  // canonical order, independent of the caller's

  std::vector<TreeNode> nodes;
  TreeNode root;
  root.value = meanOf(targets, rows);
  root.count = static_cast<int>(rows.size());
  nodes.push_back(root);

  std::vector<LeafRows> leafRows;
  leafRows.push_back({0, std::move(rows)});
  std::vector<FrontierEntry> frontier;
  frontier.push_back(searchLeaf(predictors, targets, leafRows[0].rows, 0, config));

  int leaves = 1;
  while (leaves < config.maxLeaves) {
    // Frontier leaf with the globally largest improvement; creation order on ties.
    int bestIdx = -1;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      if (!frontier[i].splittable) continue;
      if (bestIdx < 0 ||
          frontier[i].candidate.improvement > frontier[static_cast<std::size_t>(bestIdx)].candidate.improvement)
        bestIdx = static_cast<int>(i);
    }
    if (bestIdx < 0) break;

    const FrontierEntry chosen = frontier[static_cast<std::size_t>(bestIdx)];
    const std::vector<int> nodeRows = std::move(leafRows[static_cast<std::size_t>(bestIdx)].rows);

    std::vector<int> leftRows, rightRows;
    for (int r : nodeRows) {
      const double v = predictors(r, chosen.featureIndex);
      const bool goLeft =
          isMissing(v) ? chosen.candidate.missingGoesLeft : v <= chosen.candidate.threshold;
      (goLeft ? leftRows : rightRows).push_back(r);
    }

    const int leftIndex = static_cast<int>(nodes.size());
    const int rightIndex = leftIndex + 1;
    TreeNode& parent = nodes[static_cast<std::size_t>(chosen.nodeIndex)];
    parent.split = {chosen.featureIndex, chosen.candidate.threshold, chosen.candidate.improvement,
                    chosen.candidate.missingGoesLeft};
    parent.left = leftIndex;
    parent.right = rightIndex;

    TreeNode leftNode, rightNode;
    leftNode.value = meanOf(targets, leftRows);
    leftNode.count = static_cast<int>(leftRows.size());
    rightNode.value = meanOf(targets, rightRows);
    rightNode.count = static_cast<int>(rightRows.size());
    nodes.push_back(leftNode);
    nodes.push_back(rightNode);

    // Replace the split leaf's frontier slot with its children.
    frontier.erase(frontier.begin() + bestIdx);
    leafRows.erase(leafRows.begin() + bestIdx);
    frontier.push_back(searchLeaf(predictors, targets, leftRows, leftIndex, config));
    leafRows.push_back({leftIndex, std::move(leftRows)});
    frontier.push_back(searchLeaf(predictors, targets, rightRows, rightIndex, config));
    leafRows.push_back({rightIndex, std::move(rightRows)});
    ++leaves;
  }

  return RegressionTree(std::move(nodes));
}

}  // namespace relimp
