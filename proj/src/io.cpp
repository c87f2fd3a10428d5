#include "relimp/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include "json.hpp"

#include "relimp/errors.hpp"

namespace relimp {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fd(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::ofstream openOut(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  return out;
}

void dumpTo(const ordered_json& doc, const std::string& path) {
  std::ofstream out = openOut(path);
  out << doc.dump(2) << '\n';
}

// Trees dominate the model file; stream them by hand instead of building a
// document object per node (50k trees would be slow and memory-hungry).
void writeNode(std::ostream& out, const std::vector<TreeNode>& nodes, int idx) {
  const TreeNode& node = nodes[static_cast<std::size_t>(idx)];
  if (node.isLeaf()) {
    out << "{\"value\":" << fd(node.value) << ",\"count\":" << node.count << '}';
    return;
  }
  out << "{\"feature\":" << node.split.featureIndex << ",\"threshold\":" << fd(node.split.threshold)
      << ",\"improvement\":" << fd(node.split.improvement) << ",\"missing_left\":"
      << (node.split.missingGoesLeft ? "true" : "false") << ",\"left\":";
  writeNode(out, nodes, node.left);
  out << ",\"right\":";
  writeNode(out, nodes, node.right);
  out << '}';
}

int readNode(const nlohmann::json& j, std::vector<TreeNode>& nodes) {
  const int idx = static_cast<int>(nodes.size());
  nodes.emplace_back();
  if (j.contains("value")) {
    nodes[static_cast<std::size_t>(idx)].value = j.at("value").get<double>();
    nodes[static_cast<std::size_t>(idx)].count = j.at("count").get<int>();
    return idx;
  }
  SplitRecord split;
  split.featureIndex = j.at("feature").get<int>();
  split.threshold = j.at("threshold").get<double>();
  split.improvement = j.at("improvement").get<double>();
  split.missingGoesLeft = j.at("missing_left").get<bool>();
  const int left = readNode(j.at("left"), nodes);
  const int right = readNode(j.at("right"), nodes);
  TreeNode& node = nodes[static_cast<std::size_t>(idx)];
  node.split = split;
  node.left = left;
  node.right = right;
  return idx;
}

ordered_json featureMap(const std::vector<std::string>& features, const Eigen::VectorXd& values) {
  ordered_json out = ordered_json::object();
  for (std::size_t j = 0; j < features.size(); ++j)
    out[features[j]] = values(static_cast<Eigen::Index>(j));
  return out;
}

}  // namespace

void saveModelJson(const GbmModel& model, const std::string& path) {
  const GbmConfig& config = model.config();
  ordered_json header;
  header["config"] = {{"n_trees", config.nTrees},
                      {"learn_rate", config.learnRate},
                      {"subsample_fraction", config.subsampleFraction},
                      {"max_leaves", config.maxLeaves},
                      {"min_obs_leaf", config.minObsLeaf},
                      {"seed", config.seed},
                      {"mse_trace_stride", config.mseTraceStride}};
  header["baseline"] = model.baseline();
  header["feature_names"] = model.featureNames();
  std::string prefix = header.dump();
  prefix.pop_back();  // drop the closing brace; trees and trace follow

  std::ofstream out = openOut(path);
  out << prefix << ",\"trees\":[";
  for (std::size_t t = 0; t < model.trees().size(); ++t) {
    if (t) out << ",\n";
    writeNode(out, model.trees()[t].nodes(), 0);
  }
  out << "],\"mse_trace\":[";
  for (std::size_t i = 0; i < model.mseTrace().size(); ++i) {
    if (i) out << ',';
    out << '[' << model.mseTrace()[i].iteration << ',' << fd(model.mseTrace()[i].mse) << ']';
  }
  out << "]}\n";
}

GbmModel loadModelJson(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  const nlohmann::json doc = nlohmann::json::parse(in);

  GbmConfig config;
  const nlohmann::json& c = doc.at("config");
  config.nTrees = c.at("n_trees").get<int>();
  config.learnRate = c.at("learn_rate").get<double>();
  config.subsampleFraction = c.at("subsample_fraction").get<double>();
  config.maxLeaves = c.at("max_leaves").get<int>();
  config.minObsLeaf = c.at("min_obs_leaf").get<int>();
  config.seed = c.at("seed").get<std::uint64_t>();
  config.mseTraceStride = c.at("mse_trace_stride").get<int>();
  config.validate();

  std::vector<RegressionTree> trees;
  trees.reserve(doc.at("trees").size());
  for (const nlohmann::json& t : doc.at("trees")) {
    std::vector<TreeNode> nodes;
    readNode(t, nodes);
    trees.emplace_back(std::move(nodes));
  }
  std::vector<TracePoint> trace;
  trace.reserve(doc.at("mse_trace").size());
  for (const nlohmann::json& pair : doc.at("mse_trace"))
    trace.push_back({pair.at(0).get<int>(), pair.at(1).get<double>()});

  return GbmModel(doc.at("baseline").get<double>(), std::move(trees), config, std::move(trace),
                  doc.at("feature_names").get<std::vector<std::string>>());
}

void writeMseTraceCsv(const GbmModel& model, const std::string& path) {
  std::ofstream out = openOut(path);
  out << "iteration,mse\n";
  for (const TracePoint& point : model.mseTrace())
    out << point.iteration << ',' << fd(point.mse) << '\n';
}

std::vector<RankedScore> rankedScores(const ImportanceReport& report) {
  std::vector<RankedScore> out;
  out.reserve(report.scores.size());
  for (const ImportanceEntry& entry : report.scores)
    out.push_back({entry.feature, entry.raw, entry.scaled, 0});
  std::stable_sort(out.begin(), out.end(),
                   [](const RankedScore& a, const RankedScore& b) { return a.scaled > b.scaled; });
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i > 0 && out[i].scaled == out[i - 1].scaled)
      out[i].rank = out[i - 1].rank;  // ties share the lower rank number
    else
      out[i].rank = static_cast<int>(i) + 1;
  }
  return out;
}

namespace {

ordered_json importanceToJson(const ImportanceReport& report) {
  ordered_json r;
  r["method"] = toString(report.method);
  if (report.metric) r["metric"] = toString(*report.metric);
  if (report.nShuffles) r["n_shuffles"] = *report.nShuffles;
  if (report.seed) r["seed"] = *report.seed;
  ordered_json scores = ordered_json::array();
  for (const RankedScore& score : rankedScores(report))
    scores.push_back(ordered_json{{"feature", score.feature},
                                  {"raw", score.raw},
                                  {"scaled", score.scaled},
                                  {"rank", score.rank}});
  r["scores"] = std::move(scores);
  return r;
}

}  // namespace

void writeImportanceJson(const std::vector<ImportanceReport>& reports, const std::string& path) {
  ordered_json arr = ordered_json::array();
  for (const ImportanceReport& report : reports) arr.push_back(importanceToJson(report));
  dumpTo(arr, path);
}

void writeImportanceCsv(const std::vector<ImportanceReport>& reports, const std::string& path) {
  std::ofstream out = openOut(path);
  out << "method,feature,raw,scaled,rank\n";
  for (const ImportanceReport& report : reports)
    for (const RankedScore& score : rankedScores(report))
      out << toString(report.method) << ',' << score.feature << ',' << fd(score.raw) << ','
          << fd(score.scaled) << ',' << score.rank << '\n';
}

void writeRegressionJson(const RegressionSummary& summary, const std::string& path) {
  ordered_json doc;
  doc["coefficients"] = featureMap(summary.features, summary.coefficients);
  doc["intercept"] = summary.intercept;
  doc["std_errors"] = featureMap(summary.features, summary.stdErrors);
  doc["t_stats"] = featureMap(summary.features, summary.tStats);
  doc["p_values"] = featureMap(summary.features, summary.pValues);
  doc["beta_weights"] = featureMap(summary.features, summary.betaWeights);
  doc["zero_order_r"] = featureMap(summary.features, summary.zeroOrderR);
  doc["r_squared"] = summary.rSquared;
  doc["n_used"] = summary.nUsed;
  doc["dropped_rows"] = summary.droppedRows;
  dumpTo(doc, path);
}

void writeDominanceJson(const DominanceResult& result, const std::string& path) {
  ordered_json doc;
  doc["general_dominance"] = featureMap(result.features, result.generalDominance);
  doc["n_submodels"] = result.nSubmodels;
  doc["r_squared"] = result.fullRSquared;
  dumpTo(doc, path);
}

void writeRelativeWeightsJson(const RelativeWeightsResult& result, const std::string& path) {
  ordered_json doc;
  doc["epsilons"] = featureMap(result.features, result.epsilons);
  doc["r_squared"] = result.fullRSquared;
  dumpTo(doc, path);
}

void writeBaselinesCsv(const RegressionSummary& summary,
                       const std::vector<double>& usefulnessValues,
                       const DominanceResult& dominance, const RelativeWeightsResult& weights,
                       const std::string& path) {
  std::ofstream out = openOut(path);
  out << "feature,beta_weight,zero_order_r,usefulness,general_dominance,relative_weight\n";
  for (std::size_t j = 0; j < summary.features.size(); ++j) {
    const auto idx = static_cast<Eigen::Index>(j);
    out << summary.features[j] << ',' << fd(summary.betaWeights(idx)) << ','
        << fd(summary.zeroOrderR(idx)) << ',' << fd(usefulnessValues[j]) << ','
        << fd(dominance.generalDominance(idx)) << ',' << fd(weights.epsilons(idx)) << '\n';
  }
}

void writePdpCsv(const PdpCurve& curve, const std::string& path) {
  std::ofstream out = openOut(path);
  out << "grid_value,centered_dependence\n";
  for (std::size_t k = 0; k < curve.grid.size(); ++k)
    out << fd(curve.grid[k]) << ',' << fd(curve.values[k]) << '\n';
}

std::string fileFingerprint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::uint64_t hash = 14695981039346656037ULL;
  char buffer[1 << 16];
  while (in.read(buffer, sizeof(buffer)) || in.gcount() > 0) {
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      hash ^= static_cast<unsigned char>(buffer[i]);
      hash *= 1099511628211ULL;
    }
    if (got < static_cast<std::streamsize>(sizeof(buffer))) break;
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(hash));
  return hex;
}

}  // namespace relimp
