#pragma once

#include <string>
#include <vector>

#include "relimp/dataset.hpp"
#include "relimp/gbm.hpp"

namespace relimp {

// Centered partial-dependence curve for one feature: values average the
// model's predictions over every training record with the feature pinned to
// each grid point, then subtract the curve mean so the values sum to zero.
struct PdpCurve {
  std::string feature;
  std::vector<double> grid;
  std::vector<double> values;
  int nRecordsAveraged = 0;
};

// Grid = the feature's distinct observed values when there are at most
// gridSize of them, otherwise gridSize evenly spaced points spanning the
// observed range. Missing entries contribute no grid points, but every record
// still participates in the averages (the varied column is overwritten, and
// splits route other missing values along their learned directions).
PdpCurve partialDependence(const GbmModel& model, const Dataset& dataset,
                           const std::string& feature, int gridSize = 100);

// One subplot per curve on a shared vertical scale, written as a
// self-contained SVG. Output is deterministic for identical inputs.
void writePdpPanelSvg(const std::vector<PdpCurve>& curves, const std::string& path);

}  // namespace relimp
