#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "relimp/dataset.hpp"
#include "relimp/gbm.hpp"

namespace relimp {

enum class ImportanceMethod { frequency, split, permutation };
enum class PermutationMetric { mse, rmse };

const char* toString(ImportanceMethod method);
const char* toString(PermutationMetric metric);

struct ImportanceEntry {
  std::string feature;
  double raw = 0.0;
  double scaled = 0.0;  // 100 * raw / max raw; the top feature scores exactly 100
};

// Per-variable importance scores, in model feature order. Raw scores are
// nonnegative; scaled scores lie in [0, 100] with the maximum at exactly 100
// whenever any raw score is positive.
struct ImportanceReport {
  ImportanceMethod method = ImportanceMethod::split;
  std::vector<ImportanceEntry> scores;
  std::optional<PermutationMetric> metric;  // permutation only
  std::optional<int> nShuffles;             // permutation only
  std::optional<std::uint64_t> seed;        // permutation only
};

// Number of splits using each feature across all trees. Throws NoSplitsInModel
// when every tree is a single leaf.
ImportanceReport selectionFrequency(const GbmModel& model);

// Sum of squared-error improvements of all splits on each feature across all
// trees, divided by the number of trees. The divisor cancels under 0-100
// rescaling, so it never changes a scaled score or a ranking.
ImportanceReport splitImportance(const GbmModel& model);

// Model-agnostic permutation importance: the mean increase in the error metric
// when one feature column is shuffled (missing entries shuffled along with
// values, other columns untouched), averaged over nShuffles seeded
// permutations and clipped at zero. Each (feature, shuffle) pair uses its own
// stream derived from (seed, feature index, shuffle index), so results do not
// depend on evaluation order.
ImportanceReport permutationImportance(const GbmModel& model, const Dataset& dataset,
                                       PermutationMetric metric, int nShuffles,
                                       std::uint64_t seed);

}  // namespace relimp
