#pragma once

#include <string>
#include <vector>

#include "relimp/gbm.hpp"
#include "relimp/importance.hpp"

namespace relimp {

// Everything one end-to-end run needs. The permutation step reuses the GBM
// seed so a single --seed flag pins the whole run.
struct PipelineConfig {
  std::string inputPath;
  std::string responseName;
  double alpha = 0.05;    // Step-1 significance threshold
  bool skipStep1 = false; // keep all predictors (variables supplied a priori)
  GbmConfig gbm;
  PermutationMetric metric = PermutationMetric::mse;
  int nShuffles = 10;
  int pdpGridSize = 100;
  bool standardizePredictors = false;
  std::string outputDir;
};

struct StepTiming {
  std::string step;
  double milliseconds = 0.0;
};

// What a completed run produced. Together with the input file this pins the
// run exactly; timings are informational and excluded from reproducibility.
struct RunManifest {
  std::string toolVersion;
  std::string datasetFingerprint;
  PipelineConfig config;
  std::vector<std::string> outputs;  // file names relative to outputDir
  std::vector<StepTiming> timings;
};

void writeManifestJson(const RunManifest& manifest, const std::string& path);
RunManifest loadManifestJson(const std::string& path);

// Runs the three steps end to end and writes every artifact (including
// manifest.json and report.txt) under config.outputDir:
//   Step 1 — OLS screen plus every regression baseline; predictors with
//            p < alpha survive (all survive under skipStep1; an empty
//            surviving set raises NoSignificantFeatures).
//   Step 2 — boosted trees on the surviving predictors.
//   Step 3 — the three importance measures and per-feature partial dependence.
RunManifest runPipeline(const PipelineConfig& config);

// Renders the human-readable summary from a completed run's artifacts
// (read back from config.outputDir, so it also works in a later invocation).
std::string emitReport(const RunManifest& manifest);

}  // namespace relimp
