#include "mrigark/integrator.hpp"
#include "mrigark/problems.hpp"
#include "mrigark/registry.hpp"
#include "mrigark/stability.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace mrigark;

namespace {

InnerSolveConfig tight_inner(double tol = 1e-12)
{
    InnerSolveConfig cfg;
    cfg.rel_tol = cfg.abs_tol = tol;
    return cfg;
}

InnerSolveConfig exact_forcing_inner()
{
    // with f_fast = 0 the stage ODE integrates a polynomial of degree <= 2,
    // which one fixed RK4 substep reproduces exactly
    InnerSolveConfig cfg;
    cfg.mode = InnerMode::fixed;
    cfg.substeps = 1;
    cfg.order = 4;
    return cfg;
}

AdditiveSystem pure_slow(std::function<void(double, const Vec&, Vec&)> fs, std::size_t n)
{
    AdditiveSystem sys;
    sys.dimension = n;
    sys.f_slow = std::move(fs);
    sys.f_fast = [](double, const Vec&, Vec& dy) { std::fill(dy.begin(), dy.end(), 0.0); };
    return sys;
}

/// One classical explicit RK step of the base tableau, the reduction oracle.
Vec base_rk_step(const MriGarkMethod<double>& m, const AdditiveSystem& sys, double t,
                 const Vec& y, double H)
{
    const std::size_t s = m.stages();
    const std::size_t n = sys.dimension;
    std::vector<Vec> K(s, Vec(n));
    for (std::size_t i = 0; i < s; ++i) {
        Vec Yi = y;
        for (std::size_t j = 0; j < i; ++j)
            for (std::size_t d = 0; d < n; ++d)
                Yi[d] += H * m.base.A[i][j] * K[j][d];
        sys.f_slow(t + m.base.c[i] * H, Yi, K[i]);
    }
    Vec out = y;
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t d = 0; d < n; ++d)
            out[d] += H * m.base.b[i] * K[i][d];
    return out;
}

} // namespace

TEST_CASE("base-method reduction: f_fast = 0 reproduces the explicit base step")
{
    auto g = [](double, const Vec& y, Vec& dy) {
        dy[0] = std::sin(y[0]) + 0.5;
        dy[1] = y[0] - y[1] * y[1];
    };
    AdditiveSystem sys = pure_slow(g, 2);
    Vec y0 = {0.4, -0.3};
    for (const char* name : {"mri-erk22a", "mri-erk22b", "mri-erk33a", "mri-erk45a"}) {
        CAPTURE(name);
        auto m = builtin(name);
        StepResult r = step_additive(m, sys, 0.0, y0, 0.05, exact_forcing_inner());
        Vec ref = base_rk_step(m, sys, 0.0, y0, 0.05);
        for (std::size_t d = 0; d < 2; ++d)
            CHECK(r.y_next[d] == doctest::Approx(ref[d]).epsilon(1e-14));
    }
}

TEST_CASE("exact-flow reduction: f_slow = 0 gives the pure fast flow")
{
    AdditiveSystem sys;
    sys.dimension = 1;
    sys.f_fast = [](double, const Vec& y, Vec& dy) { dy[0] = -3.0 * y[0]; };
    sys.f_slow = [](double, const Vec&, Vec& dy) { dy[0] = 0.0; };
    double H = 0.7;
    for (const char* name : {"mri-erk33a", "mri-irk21a", "mri-esdirk34a"}) {
        CAPTURE(name);
        auto m = builtin(name);
        StepResult r = step_additive(m, sys, 0.0, {2.0}, H, tight_inner());
        CHECK(r.y_next[0] == doctest::Approx(2.0 * std::exp(-3.0 * H)).epsilon(1e-10));
    }
}

TEST_CASE("solve_modified_fast_ode: polynomial forcing integrates to gbar weights")
{
    auto m = builtin("mri-erk33a");
    AdditiveSystem sys;
    sys.dimension = 1;
    sys.f_fast = [](double, const Vec&, Vec& dy) { dy[0] = 0.0; };
    sys.f_slow = [](double, const Vec&, Vec& dy) { dy[0] = 0.0; };
    std::vector<Vec> rates = {{1.0}, {-2.0}, {0.5}};
    double H = 0.3;
    StepStats stats;
    // stage 3 of erk33a carries a degree-1 coupling row
    Vec v = solve_modified_fast_ode(m, 2, rates, {1.0}, 0.0, H, sys, exact_forcing_inner(), stats);
    Matrix<double> gbar = gamma_bar(m.gammas);
    double expect = 1.0;
    for (int j = 0; j < 3; ++j)
        expect += H * gbar[2][j] * rates[j][0];
    CHECK(v[0] == doctest::Approx(expect).epsilon(1e-15));

    // degree-0 row: plain quadrature of constants
    Vec v0 = solve_modified_fast_ode(m, 0, rates, {1.0}, 0.0, H, sys, exact_forcing_inner(), stats);
    CHECK(v0[0] == doctest::Approx(1.0 + H * m.gammas.gamma[0][0][0] * rates[0][0]).epsilon(1e-15));
}

TEST_CASE("solve_modified_fast_ode: relaxation with constant forcing")
{
    // v' = -v + 1 over [0, 1]: dc=1 stage with unit forcing
    MriGarkMethod<double> m = builtin("mri-erk22b"); // dc = [1, 0]
    AdditiveSystem sys;
    sys.dimension = 1;
    sys.f_fast = [](double, const Vec& y, Vec& dy) { dy[0] = -y[0]; };
    sys.f_slow = [](double, const Vec&, Vec& dy) { dy[0] = 0.0; };
    std::vector<Vec> rates = {{1.0}};
    StepStats stats;
    Vec v = solve_modified_fast_ode(m, 0, rates, {0.25}, 0.0, 1.0, sys, tight_inner(), stats);
    double expect = 0.25 * std::exp(-1.0) + (1.0 - std::exp(-1.0));
    CHECK(v[0] == doctest::Approx(expect).epsilon(1e-10));
    CHECK(stats.fast_rhs > 0);
}

TEST_CASE("implicit slow stage: linear problems converge in one Newton update")
{
    auto m = builtin("mri-irk21a");
    AdditiveSystem sys = linear_scalar(0.0, -4.0);
    std::vector<Vec> rates = {{-4.0 * 1.0}, {-4.0 * 0.5}};
    StepStats stats;
    double H = 0.2;
    Vec y = solve_implicit_slow_stage(m, 1, sys, rates, {0.5}, 0.0, H, stats);
    Matrix<double> gbar = gamma_bar(m.gammas);
    double expect = (0.5 + H * (gbar[1][0] * rates[0][0])) / (1.0 - H * gbar[1][2] * -4.0);
    CHECK(y[0] == doctest::Approx(expect).epsilon(1e-12));
    CHECK(stats.newton_iters <= 2); // affine residual: first update is exact
}

TEST_CASE("irk21a second stage reproduces the trapezoidal update")
{
    // y1 = Y2 + H(-1/2 f(y0) + 1/2 f(y1)) on a pure-slow problem
    auto m = builtin("mri-irk21a");
    auto g = [](double, const Vec& y, Vec& dy) { dy[0] = -2.0 * y[0] + 1.0; };
    AdditiveSystem sys = pure_slow(g, 1);
    double H = 0.25;
    StepResult r = step_additive(m, sys, 0.0, {1.0}, H, exact_forcing_inner());
    // reference: trapezoidal method on y' = g(y) starting from Y2 = y0 + H g(y0)
    double y0 = 1.0;
    double f0 = -2.0 * y0 + 1.0;
    double y1 = (y0 + H * 0.5 * f0 + H * 0.5 * 1.0) / (1.0 + H);
    CHECK(r.y_next[0] == doctest::Approx(y1).epsilon(1e-12));
}

TEST_CASE("newton handles a vanishing Jacobian at the root")
{
    auto m = builtin("mri-irk21a");
    AdditiveSystem sys;
    sys.dimension = 1;
    sys.f_fast = [](double, const Vec&, Vec& dy) { dy[0] = 0.0; };
    sys.f_slow = [](double, const Vec& y, Vec& dy) { dy[0] = y[0] * y[0] * y[0]; };
    std::vector<Vec> rates = {{0.001}, {0.001}};
    StepStats stats;
    Vec y = solve_implicit_slow_stage(m, 1, sys, rates, {0.01}, 0.0, 0.1, stats);
    CHECK(std::isfinite(y[0]));
    CHECK(stats.newton_iters < 50);
}

TEST_CASE("scalar linear cross-oracle against the stability function")
{
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> rate(0.1, 8.0);
    InnerSolveConfig inner = tight_inner(1e-12);
    for (const auto& name : builtin_names()) {
        CAPTURE(name);
        auto m = builtin(name);
        for (int trial = 0; trial < 5; ++trial) {
            double lf = -rate(rng), ls = -rate(rng) / 4.0;
            double H = 0.4;
            AdditiveSystem sys = linear_scalar(lf, ls);
            StepResult r = step_additive(m, sys, 0.0, {1.0}, H, inner);
            Complex R = scalar_stability(m, Complex(H * lf, 0), Complex(H * ls, 0));
            CHECK(r.y_next[0] == doctest::Approx(R.real()).epsilon(1e-10));
        }
    }
}

TEST_CASE("2d linear cross-oracle against the matrix propagator")
{
    InnerSolveConfig inner = tight_inner(1e-12);
    CoupledTestProblem p;
    p.lambda_f = -7.0;
    p.lambda_s = -0.8;
    p.xi = 0.2;
    Linear2dProblem prob = linear_2d(p);
    double H = 0.3;
    for (const auto& name : builtin_names()) {
        CAPTURE(name);
        auto m = builtin(name);
        Mat2c M = matrix_stability(m, p, H);
        for (int col = 0; col < 2; ++col) {
            Vec yf = {col == 0 ? 1.0 : 0.0};
            Vec ys = {col == 0 ? 0.0 : 1.0};
            StepResult r = step_component(m, prob.system, 0.0, yf, ys, H, inner);
            CHECK(r.y_next[0] == doctest::Approx(M[0][col].real()).epsilon(1e-10));
            CHECK(r.y_next[1] == doctest::Approx(M[1][col].real()).epsilon(1e-10));
        }
    }
}

TEST_CASE("component decoupled limit: block-diagonal coupling evolves independently")
{
    CoupledTestProblem p;
    p.lambda_f = p.lambda_s = -1.5; // eta_f = eta_s = 0 for any xi
    p.xi = 0.4;
    Linear2dProblem prob = linear_2d(p);
    auto m = builtin("mri-erk33a");
    double H = 0.2;
    StepResult r = step_component(m, prob.system, 0.0, {1.0}, {1.0}, H, tight_inner());
    CHECK(r.y_next[0] == doctest::Approx(std::exp(-1.5 * H)).epsilon(1e-10));
    CHECK(r.y_next[1] == doctest::Approx(base_stability(m, Complex(-1.5 * H, 0)).real())
                             .epsilon(1e-12));
}

TEST_CASE("slow rates are evaluated exactly once per stage for explicit methods")
{
    auto m = builtin("mri-erk45a");
    AdditiveSystem sys = linear_scalar(-2.0, -1.0);
    StepResult r = step_additive(m, sys, 0.0, {1.0}, 0.1, tight_inner());
    CHECK(r.stats.slow_rhs == 5);
    auto m3 = builtin("mri-erk33a");
    StepResult r3 = step_additive(m3, sys, 0.0, {1.0}, 0.1, tight_inner());
    CHECK(r3.stats.slow_rhs == 3);
}

TEST_CASE("integrate: zero dynamics stays constant and splits the interval")
{
    AdditiveSystem sys = linear_scalar(0.0, 0.0);
    auto m = builtin("mri-erk22a");
    Trajectory traj = integrate(m, sys, {3.0}, 0.0, 1.0, 0.3, tight_inner());
    REQUIRE(traj.t.size() == 5); // 3 full steps + shortened tail
    CHECK(traj.t.back() == doctest::Approx(1.0).epsilon(1e-14));
    for (const auto& y : traj.y)
        CHECK(y[0] == 3.0);
}

TEST_CASE("kpr local order probe: esdirk34a one-step error scales like H^4")
{
    KprProblem prob = kpr(KprParams{});
    InnerSolveConfig inner = tight_inner(1e-10);
    auto m = builtin("mri-esdirk34a");
    double H1 = 3.14159265358979323846 / 100.0;
    auto local_error = [&](double H) {
        StepResult r = step_component(m, prob.system, 0.0, prob.yf0, prob.ys0, H, inner);
        auto [yf, ys] = prob.exact(H);
        return std::hypot(r.y_next[0] - yf, r.y_next[1] - ys);
    };
    double e1 = local_error(H1);
    double e2 = local_error(H1 / 2.0);
    double rate = std::log2(e1 / e2);
    CHECK(rate > 3.4); // local order p+1 = 4
    CHECK(rate < 4.8);
}

TEST_CASE("kpr global error drops ~2^3 per halving for erk33a")
{
    KprProblem prob = kpr(KprParams{});
    InnerSolveConfig inner = tight_inner(1e-10);
    auto m = builtin("mri-erk33a");
    const double tf = 2.5 * 3.14159265358979323846;
    auto global_error = [&](double H) {
        Trajectory traj = integrate(m, prob.system, prob.yf0, prob.ys0, 0.0, tf, H, inner);
        auto [yf, ys] = prob.exact(tf);
        return std::hypot(traj.y.back()[0] - yf, traj.y.back()[1] - ys);
    };
    double e64 = global_error(tf / 64.0);
    double e128 = global_error(tf / 128.0);
    double ratio = e64 / e128;
    CHECK(ratio > 5.5);
    CHECK(ratio < 11.5);
}

TEST_CASE("embedded estimate scales like H^{min(p, phat+1)}")
{
    KprProblem prob = kpr(KprParams{});
    InnerSolveConfig inner = tight_inner(1e-11);
    auto m = builtin("mri-erk33a"); // p=3, phat=2 -> estimate order 3
    auto estimate = [&](double H) {
        StepResult r = step_component(m, prob.system, 0.0, prob.yf0, prob.ys0, H, inner);
        return r.error_estimate;
    };
    double H = 3.14159265358979323846 / 50.0;
    double rate = std::log2(estimate(H) / estimate(H / 2.0));
    CHECK(rate > 2.4);
    CHECK(rate < 3.6);
}

TEST_CASE("gray-scott smoke run stays finite")
{
    GrayScottParams params;
    params.n = 8;
    GrayScottProblem prob = gray_scott(params);
    auto m = builtin("mri-erk45a");
    InnerSolveConfig inner = tight_inner(1e-8);
    Trajectory traj = integrate(m, prob.system, prob.y0, 0.0, 0.02, 0.005, inner);
    for (double v : traj.y.back())
        CHECK(std::isfinite(v));
}

TEST_CASE("inner solver failure surfaces as a step error with index")
{
    AdditiveSystem sys;
    sys.dimension = 1;
    sys.f_fast = [](double, const Vec& y, Vec& dy) {
        if (!(y[0] < 1e100))
            throw ProblemError("blown up");
        dy[0] = y[0] * y[0]; // finite-time blowup
    };
    sys.f_slow = [](double, const Vec&, Vec& dy) { dy[0] = 0.0; };
    auto m = builtin("mri-erk22a");
    CHECK_THROWS_AS(integrate(m, sys, {1.0}, 0.0, 10.0, 5.0, tight_inner()), IntegratorError);
}
