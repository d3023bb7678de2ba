#include "mrigark/inner_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mrigark {

namespace {

// Dormand-Prince 5(4) coefficients
constexpr double dp_c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double dp_a[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
// b5 - b4
constexpr double dp_e[7] = {71.0 / 57600, 0.0,           -71.0 / 16695, 71.0 / 1920,
                            -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

Vec dopri5(const InnerRhs& rhs, Vec y, double length, double rtol, double atol,
           InnerRunStats& stats)
{
    const std::size_t n = y.size();
    double t = 0.0;
    double h = length;
    const double hmin = 1e-14 * length;

    std::vector<Vec> k(7, Vec(n));
    Vec ynew(n), ytmp(n);

    rhs(t, y, k[0]);
    ++stats.rhs_calls;

    while (t < length) {
        h = std::min(h, length - t);
        double err = 0.0;
        try {
            for (int stage = 1; stage < 7; ++stage) {
                for (std::size_t i = 0; i < n; ++i) {
                    double acc = y[i];
                    for (int j = 0; j < stage; ++j)
                        acc += h * dp_a[stage][j] * k[j][i];
                    ytmp[i] = acc;
                }
                if (stage == 6)
                    ynew = ytmp;
                rhs(t + dp_c[stage] * h, ytmp, k[stage]);
                ++stats.rhs_calls;
            }
            for (std::size_t i = 0; i < n; ++i) {
                double e = 0.0;
                for (int j = 0; j < 7; ++j)
                    e += dp_e[j] * k[j][i];
                double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
                e = h * e / sc;
                err += e * e;
            }
            err = std::sqrt(err / static_cast<double>(n));
        } catch (const InnerSolverError&) {
            throw;
        } catch (const std::runtime_error&) {
            // rate evaluation failed at a trial state: reject and retry smaller
            err = std::numeric_limits<double>::infinity();
        }

        if (std::isfinite(err) && err <= 1.0) {
            t += h;
            y = ynew;
            k[0] = k[6]; // first-same-as-last
            ++stats.steps;
            double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            h *= factor;
        } else {
            ++stats.rejected;
            double factor = std::isfinite(err) ? std::max(0.9 * std::pow(err, -0.2), 0.2) : 0.1;
            h *= factor;
        }
        if (h < hmin && t < length)
            throw InnerSolverError("inner step size underflow");
    }
    return y;
}

struct ExplicitRK {
    int stages;
    double a[4][4];
    double b[4];
    double c[4];
};

const ExplicitRK& fixed_tableau(int order)
{
    static const ExplicitRK euler{1, {{}}, {1.0}, {0.0}};
    static const ExplicitRK midpoint{2, {{}, {0.5}}, {0.0, 1.0}, {0.0, 0.5}};
    static const ExplicitRK kutta3{
        3, {{}, {0.5}, {-1.0, 2.0}}, {1.0 / 6, 2.0 / 3, 1.0 / 6}, {0.0, 0.5, 1.0}};
    static const ExplicitRK rk4{4,
                                {{}, {0.5}, {0.0, 0.5}, {0.0, 0.0, 1.0}},
                                {1.0 / 6, 1.0 / 3, 1.0 / 3, 1.0 / 6},
                                {0.0, 0.5, 0.5, 1.0}};
    switch (order) {
    case 1: return euler;
    case 2: return midpoint;
    case 3: return kutta3;
    case 4: return rk4;
    default: throw InnerSolverError("fixed inner order must be 1..4");
    }
}

Vec fixed_rk(const InnerRhs& rhs, Vec y, double length, int substeps, int order,
             InnerRunStats& stats)
{
    if (substeps < 1)
        throw InnerSolverError("fixed mode needs at least one substep");
    const ExplicitRK& tab = fixed_tableau(order);
    const std::size_t n = y.size();
    const double h = length / substeps;
    std::vector<Vec> k(tab.stages, Vec(n));
    Vec ytmp(n);
    for (int m = 0; m < substeps; ++m) {
        double t = m * h;
        for (int stage = 0; stage < tab.stages; ++stage) {
            for (std::size_t i = 0; i < n; ++i) {
                double acc = y[i];
                for (int j = 0; j < stage; ++j)
                    acc += h * tab.a[stage][j] * k[j][i];
                ytmp[i] = acc;
            }
            rhs(t + tab.c[stage] * h, ytmp, k[stage]);
            ++stats.rhs_calls;
        }
        for (std::size_t i = 0; i < n; ++i) {
            double acc = y[i];
            for (int stage = 0; stage < tab.stages; ++stage)
                acc += h * tab.b[stage] * k[stage][i];
            y[i] = acc;
        }
        ++stats.steps;
    }
    return y;
}

} // namespace

Vec solve_inner_ode(const InnerRhs& rhs, Vec v0, double length, const InnerSolveConfig& cfg,
                    InnerRunStats& stats)
{
    if (length == 0.0)
        return v0;
    if (cfg.mode == InnerMode::adaptive) {
        if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0))
            throw InnerSolverError("adaptive inner tolerances must be positive");
        return dopri5(rhs, std::move(v0), length, cfg.rel_tol, cfg.abs_tol, stats);
    }
    return fixed_rk(rhs, std::move(v0), length, cfg.substeps, cfg.order, stats);
}

} // namespace mrigark
