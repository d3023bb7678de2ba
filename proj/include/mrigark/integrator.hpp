#pragma once

#include "mrigark/inner_solver.hpp"
#include "mrigark/ode.hpp"
#include "mrigark/tableau.hpp"

namespace mrigark {

/// One MRI-GARK step on an additively partitioned system: each slow stage
/// advances the full state by solving the modified fast ODE
///   v' = dc_i f_fast(T_i + dc_i theta, v) + sum_j gamma_ij(theta/H) f_slow_j
/// over theta in [0, H]; stages with dc_i = 0 reduce to algebraic slow
/// updates (Newton-solved when the gamma superdiagonal is nonzero). The
/// embedded solution restarts from the last interior stage with the hat
/// coupling row.
StepResult step_additive(const MriGarkMethod<double>& m, const AdditiveSystem& sys, double t,
                         const Vec& y, double H, const InnerSolveConfig& inner);

/// One MRI-GARK step on a component partitioned system; the returned state
/// vectors are concatenated [y_f; y_s].
StepResult step_component(const MriGarkMethod<double>& m, const ComponentSystem& sys, double t,
                          const Vec& y_f, const Vec& y_s, double H, const InnerSolveConfig& inner);

/// The modified fast ODE of one stage, using the cached slow stage rates;
/// exposed for tests and diagnostics. slow_rates[j] holds f_slow at stage j
/// for j <= stage.
Vec solve_modified_fast_ode(const MriGarkMethod<double>& m, std::size_t stage,
                            const std::vector<Vec>& slow_rates, const Vec& v0, double t, double H,
                            const AdditiveSystem& sys, const InnerSolveConfig& inner,
                            StepStats& stats);

/// Newton solve of the decoupled implicit slow stage
///   Y = Y_i + H gbar_{i,i+1} f_slow(T_{i+1}, Y) + H sum_{j<=i} gbar_{i,j} F_j.
Vec solve_implicit_slow_stage(const MriGarkMethod<double>& m, std::size_t stage,
                              const AdditiveSystem& sys, const std::vector<Vec>& slow_rates,
                              const Vec& y_stage, double t, double H, StepStats& stats);

struct Trajectory {
    std::vector<double> t;
    std::vector<Vec> y; // for component systems, rows are [y_f; y_s]
    std::vector<double> error_estimates;
    StepStats stats;
};

/// Fixed-step integration from t0 to tf; the last step is shortened when H
/// does not divide the interval.
Trajectory integrate(const MriGarkMethod<double>& m, const AdditiveSystem& sys, const Vec& y0,
                     double t0, double tf, double H, const InnerSolveConfig& inner);

Trajectory integrate(const MriGarkMethod<double>& m, const ComponentSystem& sys, const Vec& yf0,
                     const Vec& ys0, double t0, double tf, double H,
                     const InnerSolveConfig& inner);

} // namespace mrigark
