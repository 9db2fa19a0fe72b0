#pragma once
// Bit-stable text output: trajectory/profile CSV and the structured sweep
// report. Everything prints through one 17-significant-digit float format so
// identical runs produce byte-identical files.

#include <string>
#include <utility>
#include <vector>

#include "kinalign/asymptotics.hpp"
#include "kinalign/config.hpp"
#include "kinalign/harness.hpp"
#include "kinalign/solver.hpp"

namespace kinalign {

std::string format_real17(double v);

// Rows: t,x,f_plus,f_minus for every sample time and cell.
std::string trajectory_csv(const Trajectory& traj);

// Rows: t,f1,f_minus1.
std::string homogeneous_csv(const std::vector<std::pair<double, HomogeneousState>>& samples);

// Rows: tau,x,h.
std::string layer_csv(const LayerProfile& profile, const Grid& grid);

struct SweepReportData {
  RunConfig config;
  ErrorSeries series;
  std::string conditions;  // one-line condition summary for the regime
  // rate over the rungs whose relaxation window fits in half the horizon;
  // coarser rungs never leave the layer and cannot show the limiting slope
  bool has_settled_order = false;
  double settled_order = 0.0;
  int settled_rungs = 0;
  bool pass = false;
};

// [config] section embedding the full resolved configuration, then a
// [result] section with the ladder, the fit, and the verdict.
std::string sweep_report(const SweepReportData& data);

}  // namespace kinalign
