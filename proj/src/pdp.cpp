#include "relimp/pdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "relimp/errors.hpp"

namespace relimp {

PdpCurve partialDependence(const GbmModel& model, const Dataset& dataset,
                           const std::string& feature, int gridSize) {
  if (gridSize < 2) throw InvalidConfig("pdp grid size must be at least 2");
  const std::vector<std::string>& names = model.featureNames();
  const auto it = std::find(names.begin(), names.end(), feature);
  if (it == names.end()) throw UnknownFeature(feature);
  const Eigen::Index j = static_cast<Eigen::Index>(it - names.begin());

  requirePredictorsMatch(dataset, names);
  const Eigen::MatrixXd predictors = dataset.predictors();
  const Eigen::Index n = predictors.rows();

  std::set<double> distinct;
  for (Eigen::Index i = 0; i < n; ++i)
    if (!isMissing(predictors(i, j))) distinct.insert(predictors(i, j));
  if (distinct.empty()) throw AllMissingFeature(feature);

  PdpCurve curve;
  curve.feature = feature;
  curve.nRecordsAveraged = static_cast<int>(n);
  if (static_cast<int>(distinct.size()) <= gridSize) {
    curve.grid.assign(distinct.begin(), distinct.end());
  } else {
    const double lo = *distinct.begin();
    const double hi = *distinct.rbegin();
    curve.grid.resize(static_cast<std::size_t>(gridSize));
    for (int k = 0; k < gridSize; ++k)
      curve.grid[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (gridSize - 1);
  }

  Eigen::MatrixXd pinned = predictors;
  curve.values.reserve(curve.grid.size());
  for (const double g : curve.grid) {
    pinned.col(j).setConstant(g);
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) total += model.predictRow(pinned.row(i));
    curve.values.push_back(total / static_cast<double>(n));
  }

  double mean = 0.0;
  for (const double v : curve.values) mean += v;
  mean /= static_cast<double>(curve.values.size());
  for (double& v : curve.values) v -= mean;
  return curve;
}

namespace {

std::string fmt(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.2f", value);
  return buffer;
}

std::string fmtShort(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.3g", value);
  return buffer;
}

}  // namespace

void writePdpPanelSvg(const std::vector<PdpCurve>& curves, const std::string& path) {
  if (curves.empty()) throw InvalidConfig("no curves to plot");

  // Shared vertical scale across all panels so effect sizes stay comparable.
  double loY = curves.front().values.front();
  double hiY = loY;
  for (const PdpCurve& curve : curves)
    for (const double v : curve.values) {
      loY = std::min(loY, v);
      hiY = std::max(hiY, v);
    }
  if (hiY - loY < 1e-12) {
    loY -= 1.0;
    hiY += 1.0;
  }
  const double padY = 0.05 * (hiY - loY);
  loY -= padY;
  hiY += padY;

  const int panelW = 300;
  const int panelH = 220;
  const int marginL = 54;
  const int marginR = 16;
  const int marginT = 34;
  const int marginB = 40;
  const int cellW = panelW + marginL + marginR;
  const int cellH = panelH + marginT + marginB;
  const int columns = std::min<int>(3, static_cast<int>(curves.size()));
  const int rows = (static_cast<int>(curves.size()) + columns - 1) / columns;
  const int width = columns * cellW;
  const int height = rows * cellH;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

  for (std::size_t c = 0; c < curves.size(); ++c) {
    const PdpCurve& curve = curves[c];
    const int col = static_cast<int>(c) % columns;
    const int row = static_cast<int>(c) / columns;
    const double x0 = col * cellW + marginL;
    const double y0 = row * cellH + marginT;

    double loX = curve.grid.front();
    double hiX = curve.grid.back();
    if (hiX - loX < 1e-12) {
      loX -= 1.0;
      hiX += 1.0;
    }
    const auto mapX = [&](double v) { return x0 + (v - loX) / (hiX - loX) * panelW; };
    const auto mapY = [&](double v) { return y0 + panelH - (v - loY) / (hiY - loY) * panelH; };

    out << "<rect x=\"" << fmt(x0) << "\" y=\"" << fmt(y0) << "\" width=\"" << panelW
        << "\" height=\"" << panelH << "\" fill=\"none\" stroke=\"#444\"/>\n";
    out << "<text x=\"" << fmt(x0 + panelW / 2.0) << "\" y=\"" << fmt(y0 - 12)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
        << curve.feature << "</text>\n";

    // Zero line when it falls inside the panel.
    if (loY < 0.0 && hiY > 0.0)
      out << "<line x1=\"" << fmt(x0) << "\" y1=\"" << fmt(mapY(0.0)) << "\" x2=\""
          << fmt(x0 + panelW) << "\" y2=\"" << fmt(mapY(0.0))
          << "\" stroke=\"#bbb\" stroke-dasharray=\"4 3\"/>\n";

    out << "<polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < curve.grid.size(); ++k) {
      if (k > 0) out << ' ';
      out << fmt(mapX(curve.grid[k])) << ',' << fmt(mapY(curve.values[k]));
    }
    out << "\"/>\n";

    // Axis extents.
    out << "<text x=\"" << fmt(x0 - 6) << "\" y=\"" << fmt(y0 + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmtShort(hiY) << "</text>\n";
    out << "<text x=\"" << fmt(x0 - 6) << "\" y=\"" << fmt(y0 + panelH + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmtShort(loY) << "</text>\n";
    out << "<text x=\"" << fmt(x0) << "\" y=\"" << fmt(y0 + panelH + 16)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmtShort(curve.grid.front()) << "</text>\n";
    out << "<text x=\"" << fmt(x0 + panelW) << "\" y=\"" << fmt(y0 + panelH + 16)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmtShort(curve.grid.back()) << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace relimp
