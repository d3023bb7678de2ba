#pragma once

#include "mrigark/integrator.hpp"
#include "mrigark/problems.hpp"

#include <string>
#include <variant>
#include <vector>

namespace mrigark {

struct ConvergenceRow {
    double H = 0.0;
    double error = 0.0;
    bool floor_limited = false;
};

struct ConvergenceReport {
    std::string method;
    std::string problem;
    double inner_tol = 0.0;
    double tf = 0.0;
    std::vector<ConvergenceRow> rows; // H strictly decreasing
    double observed_order = 0.0;
    bool failed = false; // a level aborted; rows hold the completed levels
    std::string failure;
};

/// A fixed-step study case: the system, its initial data, and the error of a
/// final state against the exact/reference solution at tf.
struct ConvergenceCase {
    std::string problem;
    std::variant<AdditiveSystem, ComponentSystem> system;
    Vec y0; // component systems: [y_f; y_s]
    std::size_t dim_fast = 0;
    double t0 = 0.0;
    double tf = 1.0;
    std::function<double(const Vec&)> error_at_tf;
};

/// Runs integrations at H0, H0/2, ..., (levels of them) and fits the
/// observed order over the asymptotic rows: the coarsest level is excluded
/// and so are rows at the inner-tolerance error floor (error <= 100*tol).
ConvergenceReport convergence_study(const MriGarkMethod<double>& m, const ConvergenceCase& c,
                                    double H0, int levels, const InnerSolveConfig& inner);

/// Least-squares slope of log error against log H over the included rows.
double fit_observed_order(const std::vector<ConvergenceRow>& rows);

// Ready-made cases for the benchmark problems. Errors are RMS norms of the
// final-state defect against the exact solution, or, for Gray-Scott, against
// a reference computed once by solving the unsplit system adaptively at
// reference_tol.
ConvergenceCase make_kpr_case(const KprParams& p, double tf);
ConvergenceCase make_gray_scott_case(const GrayScottParams& p, double tf, double reference_tol);
ConvergenceCase make_linear_scalar_case(double lambda_f, double lambda_s, double tf);
ConvergenceCase make_linear_2d_case(const CoupledTestProblem& p, double tf);

} // namespace mrigark
