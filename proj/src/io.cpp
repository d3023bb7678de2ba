#include "mrigark/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <ostream>

namespace mrigark {

std::string fmt17(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj)
{
    const std::size_t n = traj.y.empty() ? 0 : traj.y.front().size();
    os << "t";
    for (std::size_t i = 0; i < n; ++i)
        os << ",y_" << i;
    os << "\n";
    for (std::size_t row = 0; row < traj.t.size(); ++row) {
        os << fmt17(traj.t[row]);
        for (double v : traj.y[row])
            os << "," << fmt17(v);
        os << "\n";
    }
}

void write_stats_json(std::ostream& os, const Trajectory& traj)
{
    nlohmann::json j;
    j["steps"] = traj.error_estimates.size();
    j["slow_rhs"] = traj.stats.slow_rhs;
    j["fast_rhs"] = traj.stats.fast_rhs;
    j["newton_iters"] = traj.stats.newton_iters;
    j["rejected_inner_steps"] = traj.stats.rejected_inner_steps;
    os << j.dump(2) << "\n";
}

void write_scan_csv(std::ostream& os, const RegionScan& scan)
{
    os << "re_zs,im_zs,max_modulus,member\n";
    const GridSpec& g = scan.grid;
    for (int iy = 0; iy < g.nim; ++iy) {
        double im = g.im_min + (g.im_max - g.im_min) * iy / (g.nim - 1);
        for (int ix = 0; ix < g.nre; ++ix) {
            double re = g.re_min + (g.re_max - g.re_min) * ix / (g.nre - 1);
            std::size_t idx = static_cast<std::size_t>(iy) * g.nre + ix;
            os << fmt17(re) << "," << fmt17(im) << "," << fmt17(scan.values[idx]) << ","
               << int(scan.member[idx]) << "\n";
        }
    }
}

void write_scan_sidecar_json(std::ostream& os, const std::string& method, const RegionScan& scan)
{
    nlohmann::json j;
    j["method"] = method;
    j["mode"] = scan.mode == ScanMode::scalar ? "scalar" : "matrix";
    if (std::isinf(scan.rho))
        j["rho"] = "inf";
    else
        j["rho"] = scan.rho;
    j["alpha_deg"] = scan.alpha_deg;
    if (scan.mode == ScanMode::matrix)
        j["xi"] = scan.xi;
    j["grid"] = {{"re_min", scan.grid.re_min}, {"re_max", scan.grid.re_max},
                 {"im_min", scan.grid.im_min}, {"im_max", scan.grid.im_max},
                 {"nre", scan.grid.nre},       {"nim", scan.grid.nim}};
    os << j.dump(2) << "\n";
}

void write_convergence_csv(std::ostream& os, const ConvergenceReport& rep)
{
    os << "H,error,floor_limited\n";
    for (const auto& r : rep.rows)
        os << fmt17(r.H) << "," << fmt17(r.error) << "," << int(r.floor_limited) << "\n";
}

void write_convergence_json(std::ostream& os, const ConvergenceReport& rep)
{
    nlohmann::json j;
    j["method"] = rep.method;
    j["problem"] = rep.problem;
    j["inner_tol"] = rep.inner_tol;
    j["tf"] = rep.tf;
    j["observed_order"] = rep.observed_order;
    j["rows"] = nlohmann::json::array();
    for (const auto& r : rep.rows)
        j["rows"].push_back(
            {{"H", r.H}, {"error", r.error}, {"floor_limited", r.floor_limited}});
    os << j.dump(2) << "\n";
}

} // namespace mrigark
