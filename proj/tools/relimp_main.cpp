#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "relimp/dataset.hpp"
#include "relimp/econometrics.hpp"
#include "relimp/errors.hpp"
#include "relimp/gbm.hpp"
#include "relimp/importance.hpp"
#include "relimp/io.hpp"
#include "relimp/pdp.hpp"
#include "relimp/pipeline.hpp"
#include "relimp/version.hpp"

namespace {

struct InputArgs {
  std::string path;
  std::string response;
};

void addInputFlags(CLI::App* cmd, InputArgs& args) {
  cmd->add_option("--input", args.path, "CSV input file")->required();
  cmd->add_option("--response", args.response, "response column name")->required();
}

void addGbmFlags(CLI::App* cmd, relimp::GbmConfig& config) {
  cmd->add_option("--trees", config.nTrees, "number of boosting stages");
  cmd->add_option("--learn-rate", config.learnRate, "shrinkage applied to every tree");
  cmd->add_option("--subsample", config.subsampleFraction, "per-stage row fraction");
  cmd->add_option("--max-leaves", config.maxLeaves, "leaves per tree");
  cmd->add_option("--min-leaf", config.minObsLeaf, "minimum rows per leaf");
  cmd->add_option("--seed", config.seed, "random seed");
}

relimp::PermutationMetric parseMetric(const std::string& name) {
  return name == "rmse" ? relimp::PermutationMetric::rmse : relimp::PermutationMetric::mse;
}

void printSummary(const relimp::RegressionSummary& summary) {
  std::printf("%-16s %10s %10s %8s %8s %8s %8s\n", "feature", "coef", "std.err", "t", "p", "beta",
              "r");
  for (std::size_t j = 0; j < summary.features.size(); ++j) {
    const auto idx = static_cast<Eigen::Index>(j);
    std::printf("%-16s %10.4f %10.4f %8.3f %8.4f %8.4f %8.4f\n", summary.features[j].c_str(),
                summary.coefficients(idx), summary.stdErrors(idx), summary.tStats(idx),
                summary.pValues(idx), summary.betaWeights(idx), summary.zeroOrderR(idx));
  }
  std::printf("intercept = %.4f, R^2 = %.4f, complete rows used = %ld (%zu dropped)\n",
              summary.intercept, summary.rSquared, summary.nUsed, summary.droppedRows.size());
}

void printImportance(const relimp::ImportanceReport& report) {
  std::printf("%s importance\n", relimp::toString(report.method));
  for (const relimp::RankedScore& score : relimp::rankedScores(report))
    std::printf("  %2d. %-16s raw %-12g scaled %7.2f\n", score.rank, score.feature.c_str(),
                score.raw, score.scaled);
}

std::string joinPath(const std::string& dir, const std::string& name) {
  return dir + "/" + name;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"relative importance toolkit: OLS screen, boosted trees, importance measures"};
  app.set_version_flag("--version", relimp::kVersion);
  app.require_subcommand(1);

  // load-check
  InputArgs loadArgs;
  CLI::App* loadCheck = app.add_subcommand("load-check", "load a CSV and print column diagnostics");
  addInputFlags(loadCheck, loadArgs);

  // regress / dominance / relweights
  InputArgs regressArgs, dominanceArgs, relweightsArgs;
  std::string regressOut, dominanceOut, relweightsOut;
  CLI::App* regress = app.add_subcommand("regress", "OLS with significance tests and beta weights");
  addInputFlags(regress, regressArgs);
  regress->add_option("--out", regressOut, "directory for regression.json");
  CLI::App* dominance = app.add_subcommand("dominance", "general dominance analysis");
  addInputFlags(dominance, dominanceArgs);
  dominance->add_option("--out", dominanceOut, "directory for dominance.json");
  CLI::App* relweights = app.add_subcommand("relweights", "Johnson relative weights");
  addInputFlags(relweights, relweightsArgs);
  relweights->add_option("--out", relweightsOut, "directory for relative_weights.json");

  // fit
  InputArgs fitArgs;
  relimp::GbmConfig fitConfig;
  std::string fitOut;
  CLI::App* fit = app.add_subcommand("fit", "fit the boosted regression tree model");
  addInputFlags(fit, fitArgs);
  addGbmFlags(fit, fitConfig);
  fit->add_option("--out", fitOut, "directory for model.json and mse_trace.csv")->required();

  // importance
  InputArgs importanceArgs;
  std::string importanceModel, importanceOut, importanceMetric = "mse";
  int importanceShuffles = 10;
  std::uint64_t importanceSeed = 42;
  CLI::App* importanceCmd =
      app.add_subcommand("importance", "frequency, split, and permutation importance");
  addInputFlags(importanceCmd, importanceArgs);
  importanceCmd->add_option("--model", importanceModel, "model.json from `fit`")->required();
  importanceCmd->add_option("--metric", importanceMetric, "permutation metric")
      ->check(CLI::IsMember({"mse", "rmse"}));
  importanceCmd->add_option("--shuffles", importanceShuffles, "permutations per feature");
  importanceCmd->add_option("--seed", importanceSeed, "permutation seed");
  importanceCmd->add_option("--out", importanceOut, "directory for importance.json/csv");

  // pdp
  InputArgs pdpArgs;
  std::string pdpModel, pdpOut = ".";
  std::vector<std::string> pdpFeatures;
  int pdpGrid = 100;
  CLI::App* pdp = app.add_subcommand("pdp", "centered partial dependence curves");
  addInputFlags(pdp, pdpArgs);
  pdp->add_option("--model", pdpModel, "model.json from `fit`")->required();
  pdp->add_option("--feature", pdpFeatures, "feature(s) to plot (default: all)");
  pdp->add_option("--pdp-grid", pdpGrid, "maximum grid points");
  pdp->add_option("--out", pdpOut, "directory for pdp_<feature>.csv and pdp_panel.svg");

  // run
  relimp::PipelineConfig runConfig;
  std::string runMetric = "mse";
  CLI::App* run = app.add_subcommand("run", "full 3-step pipeline");
  run->add_option("--input", runConfig.inputPath, "CSV input file")->required();
  run->add_option("--response", runConfig.responseName, "response column name")->required();
  run->add_option("--alpha", runConfig.alpha, "Step-1 significance threshold");
  run->add_flag("--skip-step1", runConfig.skipStep1, "keep all predictors (skip the OLS screen)");
  addGbmFlags(run, runConfig.gbm);
  run->add_option("--metric", runMetric, "permutation metric")
      ->check(CLI::IsMember({"mse", "rmse"}));
  run->add_option("--shuffles", runConfig.nShuffles, "permutations per feature");
  run->add_option("--pdp-grid", runConfig.pdpGridSize, "maximum PDP grid points");
  run->add_flag("--standardize", runConfig.standardizePredictors,
                "standardize predictors before fitting");
  run->add_option("--out", runConfig.outputDir, "output directory")->required();

  // report
  std::string reportDir;
  CLI::App* report = app.add_subcommand("report", "re-render report.txt from a run directory");
  report->add_option("--out", reportDir, "directory holding manifest.json")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*loadCheck) {
      const relimp::Dataset data = relimp::loadCsv(loadArgs.path, loadArgs.response);
      std::printf("%ld rows x %ld columns, response %s\n", static_cast<long>(data.rows()),
                  static_cast<long>(data.cols()), data.responseName().c_str());
      std::printf("%-16s %10s %10s %10s %10s %8s\n", "column", "mean", "std", "min", "max",
                  "missing");
      for (Eigen::Index c = 0; c < data.cols(); ++c) {
        const relimp::ColumnStats stats = relimp::columnStats(data, c);
        std::printf("%-16s %10.4f %10.4f %10.4f %10.4f %8ld\n",
                    data.columnNames()[static_cast<std::size_t>(c)].c_str(), stats.mean,
                    stats.stdDev, stats.min, stats.max, static_cast<long>(stats.missingCount));
      }
    } else if (*regress) {
      const relimp::Dataset data = relimp::loadCsv(regressArgs.path, regressArgs.response);
      const relimp::RegressionSummary summary = relimp::olsFit(data);
      printSummary(summary);
      if (!regressOut.empty()) {
        std::filesystem::create_directories(regressOut);
        relimp::writeRegressionJson(summary, joinPath(regressOut, "regression.json"));
      }
    } else if (*dominance) {
      const relimp::Dataset data = relimp::loadCsv(dominanceArgs.path, dominanceArgs.response);
      const relimp::DominanceResult result = relimp::dominanceAnalysis(data);
      std::printf("general dominance over %ld submodels (full R^2 = %.4f)\n", result.nSubmodels,
                  result.fullRSquared);
      for (std::size_t j = 0; j < result.features.size(); ++j)
        std::printf("  %-16s %.6f\n", result.features[j].c_str(),
                    result.generalDominance(static_cast<Eigen::Index>(j)));
      if (!dominanceOut.empty()) {
        std::filesystem::create_directories(dominanceOut);
        relimp::writeDominanceJson(result, joinPath(dominanceOut, "dominance.json"));
      }
    } else if (*relweights) {
      const relimp::Dataset data = relimp::loadCsv(relweightsArgs.path, relweightsArgs.response);
      const relimp::RelativeWeightsResult result = relimp::relativeWeights(data);
      std::printf("relative weights (full R^2 = %.4f)\n", result.fullRSquared);
      for (std::size_t j = 0; j < result.features.size(); ++j)
        std::printf("  %-16s %.6f\n", result.features[j].c_str(),
                    result.epsilons(static_cast<Eigen::Index>(j)));
      if (!relweightsOut.empty()) {
        std::filesystem::create_directories(relweightsOut);
        relimp::writeRelativeWeightsJson(result, joinPath(relweightsOut, "relative_weights.json"));
      }
    } else if (*fit) {
      const relimp::Dataset data = relimp::loadCsv(fitArgs.path, fitArgs.response);
      const relimp::GbmModel model = relimp::fitGbm(data, fitConfig);
      std::filesystem::create_directories(fitOut);
      relimp::saveModelJson(model, joinPath(fitOut, "model.json"));
      relimp::writeMseTraceCsv(model, joinPath(fitOut, "mse_trace.csv"));
      std::printf("fit %zu trees, final training MSE %.6g, R^2 %.4f\n", model.trees().size(),
                  relimp::meanSquaredError(model, data), relimp::rSquared(model, data));
    } else if (*importanceCmd) {
      const relimp::Dataset data = relimp::loadCsv(importanceArgs.path, importanceArgs.response);
      const relimp::GbmModel model = relimp::loadModelJson(importanceModel);
      const std::vector<relimp::ImportanceReport> reports = {
          relimp::selectionFrequency(model), relimp::splitImportance(model),
          relimp::permutationImportance(model, data, parseMetric(importanceMetric),
                                        importanceShuffles, importanceSeed)};
      for (const relimp::ImportanceReport& r : reports) printImportance(r);
      if (!importanceOut.empty()) {
        std::filesystem::create_directories(importanceOut);
        relimp::writeImportanceJson(reports, joinPath(importanceOut, "importance.json"));
        relimp::writeImportanceCsv(reports, joinPath(importanceOut, "importance.csv"));
      }
    } else if (*pdp) {
      const relimp::Dataset data = relimp::loadCsv(pdpArgs.path, pdpArgs.response);
      const relimp::GbmModel model = relimp::loadModelJson(pdpModel);
      if (pdpFeatures.empty()) pdpFeatures = model.featureNames();
      std::filesystem::create_directories(pdpOut);
      std::vector<relimp::PdpCurve> curves;
      for (const std::string& name : pdpFeatures) {
        curves.push_back(relimp::partialDependence(model, data, name, pdpGrid));
        const std::string file = joinPath(pdpOut, "pdp_" + name + ".csv");
        relimp::writePdpCsv(curves.back(), file);
        std::printf("wrote %s (%zu grid points)\n", file.c_str(), curves.back().grid.size());
      }
      relimp::writePdpPanelSvg(curves, joinPath(pdpOut, "pdp_panel.svg"));
      std::printf("wrote %s\n", joinPath(pdpOut, "pdp_panel.svg").c_str());
    } else if (*run) {
      runConfig.metric = parseMetric(runMetric);
      const relimp::RunManifest manifest = relimp::runPipeline(runConfig);
      std::fputs(relimp::emitReport(manifest).c_str(), stdout);
    } else if (*report) {
      const relimp::RunManifest manifest =
          relimp::loadManifestJson(joinPath(reportDir, "manifest.json"));
      std::fputs(relimp::emitReport(manifest).c_str(), stdout);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
