#pragma once

#include "mrigark/convergence.hpp"
#include "mrigark/integrator.hpp"
#include "mrigark/stability.hpp"

#include <iosfwd>
#include <string>

namespace mrigark {

/// 17 significant digits, round-trip safe.
std::string fmt17(double x);

void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
void write_stats_json(std::ostream& os, const Trajectory& traj);

void write_scan_csv(std::ostream& os, const RegionScan& scan);
void write_scan_sidecar_json(std::ostream& os, const std::string& method, const RegionScan& scan);

void write_convergence_csv(std::ostream& os, const ConvergenceReport& rep);
void write_convergence_json(std::ostream& os, const ConvergenceReport& rep);

} // namespace mrigark
