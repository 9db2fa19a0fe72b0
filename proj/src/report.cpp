#include "kinalign/report.hpp"

#include <cstdio>
#include <sstream>

namespace kinalign {

std::string format_real17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream out;
  out << "t,x,f_plus,f_minus\n";
  for (std::size_t s = 0; s < traj.times.size(); ++s) {
    std::string t = format_real17(traj.times[s]);
    for (int i = 0; i < traj.grid.n_cells; ++i) {
      out << t << ',' << format_real17(traj.grid.center(i)) << ','
          << format_real17(traj.states[s].f_plus[i]) << ','
          << format_real17(traj.states[s].f_minus[i]) << '\n';
    }
  }
  return out.str();
}

std::string homogeneous_csv(const std::vector<std::pair<double, HomogeneousState>>& samples) {
  std::ostringstream out;
  out << "t,f1,f_minus1\n";
  for (const auto& [t, state] : samples) {
    out << format_real17(t) << ',' << format_real17(state.f1) << ','
        << format_real17(state.f_minus1) << '\n';
  }
  return out.str();
}

std::string layer_csv(const LayerProfile& profile, const Grid& grid) {
  std::ostringstream out;
  out << "tau,x,h\n";
  for (std::size_t s = 0; s < profile.taus.size(); ++s) {
    std::string tau = format_real17(profile.taus[s]);
    for (int i = 0; i < grid.n_cells; ++i) {
      out << tau << ',' << format_real17(grid.center(i)) << ','
          << format_real17(profile.values[s].rho[i]) << '\n';
    }
  }
  return out.str();
}

std::string sweep_report(const SweepReportData& data) {
  std::ostringstream out;
  out << "[config]\n" << emit_config(data.config);
  out << "\n[result]\n";
  out << "experiment = " << experiment_name(data.config.experiment) << "\n";
  out << "gamma = " << format_real17(data.config.gamma) << "\n";
  out << "epsilons = ";
  for (std::size_t i = 0; i < data.series.epsilons.size(); ++i) {
    if (i) out << ", ";
    out << format_real17(data.series.epsilons[i]);
  }
  out << "\n";
  out << "errors = ";
  for (std::size_t i = 0; i < data.series.errors.size(); ++i) {
    if (i) out << ", ";
    out << format_real17(data.series.errors[i]);
  }
  out << "\n";
  if (data.series.has_order) {
    out << "fitted_order = " << format_real17(data.series.fitted_order) << "\n";
    out << "fit_residual = " << format_real17(data.series.fit_residual) << "\n";
  } else {
    out << "fitted_order = none\n";
  }
  if (data.has_settled_order) {
    out << "settled_order = " << format_real17(data.settled_order) << " over "
        << data.settled_rungs << " rungs with the relaxation window inside half the horizon\n";
  }
  out << "monotone = " << (data.series.monotone ? "true" : "false") << "\n";
  out << "n_cells_used = " << data.series.n_cells_used << "\n";
  out << "refined = " << (data.series.refined ? "true" : "false") << "\n";
  out << "conditions = " << data.conditions << "\n";
  out << "pass = " << (data.pass ? "true" : "false") << "\n";
  return out.str();
}

}  // namespace kinalign
