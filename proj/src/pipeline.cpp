#include "relimp/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include "json.hpp"

#include "relimp/econometrics.hpp"
#include "relimp/errors.hpp"
#include "relimp/io.hpp"
#include "relimp/pdp.hpp"
#include "relimp/version.hpp"

namespace relimp {

namespace {

using ordered_json = nlohmann::ordered_json;

template <class... Args>
std::string strf(const char* format, Args... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof(buffer), format, args...);
  return buffer;
}

ordered_json configToJson(const PipelineConfig& config) {
  ordered_json j;
  j["input"] = config.inputPath;
  j["response"] = config.responseName;
  j["alpha"] = config.alpha;
  j["skip_step1"] = config.skipStep1;
  j["standardize"] = config.standardizePredictors;
  j["gbm"] = {{"n_trees", config.gbm.nTrees},
              {"learn_rate", config.gbm.learnRate},
              {"subsample_fraction", config.gbm.subsampleFraction},
              {"max_leaves", config.gbm.maxLeaves},
              {"min_obs_leaf", config.gbm.minObsLeaf},
              {"seed", config.gbm.seed},
              {"mse_trace_stride", config.gbm.mseTraceStride}};
  j["permutation"] = {{"metric", toString(config.metric)},
                      {"n_shuffles", config.nShuffles},
                      {"seed", config.gbm.seed}};
  j["pdp_grid_size"] = config.pdpGridSize;
  j["output_dir"] = config.outputDir;
  return j;
}

PipelineConfig configFromJson(const ordered_json& j) {
  PipelineConfig config;
  config.inputPath = j.at("input").get<std::string>();
  config.responseName = j.at("response").get<std::string>();
  config.alpha = j.at("alpha").get<double>();
  config.skipStep1 = j.at("skip_step1").get<bool>();
  config.standardizePredictors = j.at("standardize").get<bool>();
  const ordered_json& g = j.at("gbm");
  config.gbm.nTrees = g.at("n_trees").get<int>();
  config.gbm.learnRate = g.at("learn_rate").get<double>();
  config.gbm.subsampleFraction = g.at("subsample_fraction").get<double>();
  config.gbm.maxLeaves = g.at("max_leaves").get<int>();
  config.gbm.minObsLeaf = g.at("min_obs_leaf").get<int>();
  config.gbm.seed = g.at("seed").get<std::uint64_t>();
  config.gbm.mseTraceStride = g.at("mse_trace_stride").get<int>();
  config.metric = j.at("permutation").at("metric").get<std::string>() == "rmse"
                      ? PermutationMetric::rmse
                      : PermutationMetric::mse;
  config.nShuffles = j.at("permutation").at("n_shuffles").get<int>();
  config.pdpGridSize = j.at("pdp_grid_size").get<int>();
  config.outputDir = j.at("output_dir").get<std::string>();
  return config;
}

class StepClock {
 public:
  explicit StepClock(std::vector<StepTiming>& sink) : sink_(sink) {}
  void lap(const std::string& step) {
    const auto now = std::chrono::steady_clock::now();
    sink_.push_back({step, std::chrono::duration<double, std::milli>(now - mark_).count()});
    mark_ = now;
  }

 private:
  std::vector<StepTiming>& sink_;
  std::chrono::steady_clock::time_point mark_ = std::chrono::steady_clock::now();
};

struct TraceRow {
  int iteration;
  double mse;
};

std::vector<TraceRow> readTraceCsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::vector<TraceRow> rows;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos) throw Error("malformed trace line: " + line);
    TraceRow row{};
    const char* end = line.data() + comma;
    if (std::from_chars(line.data(), end, row.iteration).ptr != end)
      throw Error("malformed trace line: " + line);
    const char* vBegin = line.data() + comma + 1;
    const char* vEnd = line.data() + line.size();
    if (std::from_chars(vBegin, vEnd, row.mse).ptr != vEnd)
      throw Error("malformed trace line: " + line);
    rows.push_back(row);
  }
  if (rows.empty()) throw Error("empty MSE trace in '" + path + "'");
  return rows;
}

// Earliest trace iteration from which every later MSE stays within 5% of the
// final value — the "flatline" onset at trace resolution.
int flatlineIteration(const std::vector<TraceRow>& trace) {
  const double finalMse = trace.back().mse;
  const double band = 0.05 * finalMse;
  int onset = trace.back().iteration;
  for (auto it = trace.rbegin(); it != trace.rend(); ++it) {
    if (std::fabs(it->mse - finalMse) > band) break;
    onset = it->iteration;
  }
  return onset;
}

void appendImportanceTables(std::string& text, const ordered_json& reports) {
  if (reports.empty()) {
    text += "  no splits in the model; importance scores are undefined\n";
    return;
  }
  std::size_t nRows = 0;
  for (const ordered_json& report : reports) nRows = std::max(nRows, report.at("scores").size());

  text += "  ";
  for (const ordered_json& report : reports) {
    std::string title = report.at("method").get<std::string>();
    if (report.contains("metric"))
      title += " (" + report.at("metric").get<std::string>() + ", " +
               std::to_string(report.at("n_shuffles").get<int>()) + " shuffles)";
    text += strf("%-34s", title.c_str());
  }
  text += '\n';
  for (std::size_t i = 0; i < nRows; ++i) {
    text += "  ";
    for (const ordered_json& report : reports) {
      const ordered_json& scores = report.at("scores");
      if (i < scores.size()) {
        const ordered_json& s = scores[i];
        text += strf("%2d. %-16s %7.2f       ", s.at("rank").get<int>(),
                     s.at("feature").get<std::string>().c_str(), s.at("scaled").get<double>());
      } else {
        text += strf("%-34s", "");
      }
    }
    text += '\n';
  }
}

}  // namespace

void writeManifestJson(const RunManifest& manifest, const std::string& path) {
  ordered_json doc;
  doc["tool_version"] = manifest.toolVersion;
  doc["dataset_fingerprint"] = manifest.datasetFingerprint;
  doc["config"] = configToJson(manifest.config);
  doc["outputs"] = manifest.outputs;
  ordered_json timings = ordered_json::object();
  for (const StepTiming& t : manifest.timings) timings[t.step] = t.milliseconds;
  doc["timings_ms"] = std::move(timings);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << doc.dump(2) << '\n';
}

RunManifest loadManifestJson(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  const ordered_json doc = ordered_json::parse(in);
  RunManifest manifest;
  manifest.toolVersion = doc.at("tool_version").get<std::string>();
  manifest.datasetFingerprint = doc.at("dataset_fingerprint").get<std::string>();
  manifest.config = configFromJson(doc.at("config"));
  manifest.outputs = doc.at("outputs").get<std::vector<std::string>>();
  for (const auto& [step, ms] : doc.at("timings_ms").items())
    manifest.timings.push_back({step, ms.get<double>()});
  return manifest;
}

RunManifest runPipeline(const PipelineConfig& config) {
  config.gbm.validate();
  if (!(config.alpha > 0.0 && config.alpha < 1.0))
    throw InvalidConfig("alpha must lie strictly between 0 and 1");
  if (config.nShuffles < 1) throw InvalidConfig("n_shuffles must be at least 1");
  if (config.pdpGridSize < 2) throw InvalidConfig("pdp grid size must be at least 2");
  if (config.outputDir.empty()) throw InvalidConfig("output directory required");
  std::filesystem::create_directories(config.outputDir);
  const auto artifact = [&](const std::string& name) { return config.outputDir + "/" + name; };

  RunManifest manifest;
  manifest.toolVersion = kVersion;
  manifest.config = config;
  StepClock clock(manifest.timings);

  manifest.datasetFingerprint = fileFingerprint(config.inputPath);
  const Dataset dataset = loadCsv(config.inputPath, config.responseName);
  clock.lap("load");

  // Step 1: the OLS screen plus every regression baseline, always written so
  // the side-by-side comparison exists even when the screen is skipped.
  const RegressionSummary summary = olsFit(dataset);
  writeRegressionJson(summary, artifact("regression.json"));
  const DominanceResult dominance = dominanceAnalysis(dataset);
  writeDominanceJson(dominance, artifact("dominance.json"));
  const RelativeWeightsResult weights = relativeWeights(dataset);
  writeRelativeWeightsJson(weights, artifact("relative_weights.json"));
  std::vector<double> usefulnessValues;
  for (const std::string& name : summary.features)
    usefulnessValues.push_back(usefulness(dataset, name));
  writeBaselinesCsv(summary, usefulnessValues, dominance, weights, artifact("baselines.csv"));

  const std::vector<std::string> surviving =
      config.skipStep1 ? dataset.predictorNames() : significantFeatures(summary, config.alpha);
  if (surviving.empty()) throw NoSignificantFeatures(config.alpha);
  clock.lap("step1");

  // Step 2: exploratory boosted-tree model on the surviving predictors.
  Dataset modelData = dataset.withPredictors(surviving);
  if (config.standardizePredictors) modelData = standardize(modelData);
  const GbmModel model = fitGbm(modelData, config.gbm);
  saveModelJson(model, artifact("model.json"));
  writeMseTraceCsv(model, artifact("mse_trace.csv"));
  clock.lap("step2");

  // Step 3: the three importance readings plus partial dependence per feature.
  std::vector<ImportanceReport> reports;
  try {
    reports.push_back(selectionFrequency(model));
    reports.push_back(splitImportance(model));
    reports.push_back(
        permutationImportance(model, modelData, config.metric, config.nShuffles, config.gbm.seed));
  } catch (const NoSplitsInModel&) {
    reports.clear();  // the report surfaces this as an explicit notice
  }
  writeImportanceJson(reports, artifact("importance.json"));
  writeImportanceCsv(reports, artifact("importance.csv"));

  std::vector<PdpCurve> curves;
  std::vector<std::string> pdpFiles;
  for (const std::string& name : surviving) {
    curves.push_back(partialDependence(model, modelData, name, config.pdpGridSize));
    pdpFiles.push_back("pdp_" + name + ".csv");
    writePdpCsv(curves.back(), artifact(pdpFiles.back()));
  }
  writePdpPanelSvg(curves, artifact("pdp_panel.svg"));
  clock.lap("step3");

  manifest.outputs = {"regression.json", "dominance.json", "relative_weights.json",
                      "baselines.csv",   "model.json",     "mse_trace.csv",
                      "importance.json", "importance.csv"};
  manifest.outputs.insert(manifest.outputs.end(), pdpFiles.begin(), pdpFiles.end());
  manifest.outputs.push_back("pdp_panel.svg");
  manifest.outputs.push_back("report.txt");

  writeManifestJson(manifest, artifact("manifest.json"));
  const std::string report = emitReport(manifest);
  std::ofstream out(artifact("report.txt"), std::ios::binary);
  if (!out) throw Error("cannot write report.txt");
  out << report;
  return manifest;
}

std::string emitReport(const RunManifest& manifest) {
  const PipelineConfig& config = manifest.config;
  const auto artifact = [&](const std::string& name) { return config.outputDir + "/" + name; };

  std::ifstream regIn(artifact("regression.json"), std::ios::binary);
  if (!regIn) throw Error("cannot open regression.json");
  const ordered_json regression = ordered_json::parse(regIn);
  std::ifstream impIn(artifact("importance.json"), std::ios::binary);
  if (!impIn) throw Error("cannot open importance.json");
  const ordered_json importance = ordered_json::parse(impIn);
  const std::vector<TraceRow> trace = readTraceCsv(artifact("mse_trace.csv"));

  std::string text;
  text += "Relative importance pipeline report\n";
  text += "===================================\n";
  text += "input: " + config.inputPath + " (fingerprint " + manifest.datasetFingerprint + ")\n";
  text += "response: " + config.responseName + " | tool version " + manifest.toolVersion +
          " | seed " + std::to_string(config.gbm.seed) + "\n\n";

  text += "Step 1 - OLS screen\n";
  text += "-------------------\n";
  if (config.skipStep1)
    text += "  screen: skipped (variables supplied a priori); all predictors retained\n";
  else
    text += strf("  screen: keep predictors with p < %g\n", config.alpha);
  text += strf("  %-16s %10s %10s %8s %8s %8s %8s\n", "feature", "coef", "std.err", "t", "p",
               "beta", "r");
  const ordered_json& coefs = regression.at("coefficients");
  for (const auto& [feature, coef] : coefs.items()) {
    text += strf("  %-16s %10.4f %10.4f %8.3f %8.4f %8.4f %8.4f\n", feature.c_str(),
                 coef.get<double>(), regression.at("std_errors").at(feature).get<double>(),
                 regression.at("t_stats").at(feature).get<double>(),
                 regression.at("p_values").at(feature).get<double>(),
                 regression.at("beta_weights").at(feature).get<double>(),
                 regression.at("zero_order_r").at(feature).get<double>());
  }
  text += strf("  intercept = %.4f, R^2 = %.4f, complete rows used = %ld (%zu dropped)\n",
               regression.at("intercept").get<double>(), regression.at("r_squared").get<double>(),
               regression.at("n_used").get<long>(), regression.at("dropped_rows").size());
  std::string surviving;
  for (const std::string& name : manifest.outputs) {
    if (name.rfind("pdp_", 0) == 0 && name.size() > 8 && name.substr(name.size() - 4) == ".csv") {
      if (!surviving.empty()) surviving += ", ";
      surviving += name.substr(4, name.size() - 8);
    }
  }
  text += "  carried into Step 2: " + surviving + "\n\n";

  text += "Step 2 - Boosted regression trees\n";
  text += "---------------------------------\n";
  text += strf("  trees = %d, learn_rate = %g, subsample = %g, max_leaves = %d, min_obs_leaf = %d\n",
               config.gbm.nTrees, config.gbm.learnRate, config.gbm.subsampleFraction,
               config.gbm.maxLeaves, config.gbm.minObsLeaf);
  const double finalMse = trace.back().mse;
  text += strf("  training MSE: %.6g at iteration 0, %.6g at iteration %d\n", trace.front().mse,
               finalMse, trace.back().iteration);

  // Training R^2 from the trace and the response's population variance.
  const Dataset dataset = loadCsv(config.inputPath, config.responseName);
  const Eigen::VectorXd y = dataset.response();
  const double popVar = (y.array() - y.mean()).square().sum() / static_cast<double>(y.size());
  if (popVar > 0.0)
    text += strf("  training R^2 = %.4f\n", 1.0 - finalMse / popVar);
  else
    text += "  training R^2 undefined (constant response)\n";
  text += strf("  MSE within 5%% of its final value from iteration %d onward\n\n",
               flatlineIteration(trace));

  text += "Step 3 - Importance (0-100 scaled)\n";
  text += "----------------------------------\n";
  appendImportanceTables(text, importance);
  text += '\n';

  text += "Partial dependence files:\n";
  for (const std::string& name : manifest.outputs)
    if (name.rfind("pdp_", 0) == 0 && name.size() > 4 && name.substr(name.size() - 4) == ".csv")
      text += "  " + name + "\n";
  return text;
}

}  // namespace relimp
