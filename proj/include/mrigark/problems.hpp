#pragma once

#include "mrigark/ode.hpp"
#include "mrigark/stability.hpp"

#include <array>
#include <utility>

namespace mrigark {

struct ProblemError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Gray-Scott reaction-diffusion on the unit square, periodic boundaries,
/// 5-point second order stencil with spacing 1/n. Slow part: diffusion;
/// fast part: the reaction u' = -u v^2 + f(1-u), v' = u v^2 - (f+k) v.
struct GrayScottParams {
    double eps_u = 0.0625;
    double eps_v = 0.0312;
    double feed = 0.0180;
    double kill = 0.0520;
    int n = 32;
};

struct GrayScottProblem {
    GrayScottParams params;
    AdditiveSystem system;
    Vec y0; // [u cells; v cells], u=1/v=0 with a centered square perturbation
};

GrayScottProblem gray_scott(const GrayScottParams& params);

/// Nonlinear Kvaerno-Prothero-Robinson pair driven through the coupling
/// matrix Omega; exact solution (sqrt(3+cos(omega t)), sqrt(2+cos t)).
struct KprParams {
    double lambda_f = -10.0;
    double lambda_s = -1.0;
    double xi = 0.1;
    double alpha = 1.0;
    double omega = 20.0;
};

struct KprProblem {
    KprParams params;
    ComponentSystem system;
    Vec yf0, ys0;
    std::function<std::pair<double, double>(double)> exact;
};

KprProblem kpr(const KprParams& params);

/// Scalar y' = lambda_f y + lambda_s y in additive form.
AdditiveSystem linear_scalar(double lambda_f, double lambda_s);

/// The coupled 2x2 linear test problem as a component system, with the exact
/// flow map exp(t*Omega) available for error oracles. Requires real rates.
using Mat2d = std::array<std::array<double, 2>, 2>;

struct Linear2dProblem {
    CoupledTestProblem problem;
    ComponentSystem system;
    std::function<Mat2d(double)> flow;
};

Linear2dProblem linear_2d(const CoupledTestProblem& problem);

} // namespace mrigark
