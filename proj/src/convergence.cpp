#include "mrigark/convergence.hpp"

#include <cmath>
#include <memory>

namespace mrigark {

double fit_observed_order(const std::vector<ConvergenceRow>& rows)
{
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& r : rows) {
        if (r.floor_limited || r.error <= 0.0)
            continue;
        double x = std::log(r.H);
        double y = std::log(r.error);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2)
        return std::numeric_limits<double>::quiet_NaN();
    double denom = n * sxx - sx * sx;
    return (n * sxy - sx * sy) / denom;
}

ConvergenceReport convergence_study(const MriGarkMethod<double>& m, const ConvergenceCase& c,
                                    double H0, int levels, const InnerSolveConfig& inner)
{
    if (levels < 3)
        throw IntegratorError("convergence study needs at least 3 levels");
    ConvergenceReport rep;
    rep.method = m.name;
    rep.problem = c.problem;
    rep.inner_tol = inner.rel_tol;
    rep.tf = c.tf;

    double H = H0;
    for (int level = 0; level < levels; ++level, H /= 2.0) {
        Trajectory traj;
        try {
            if (std::holds_alternative<AdditiveSystem>(c.system)) {
                traj = integrate(m, std::get<AdditiveSystem>(c.system), c.y0, c.t0, c.tf, H, inner);
            } else {
                const auto& sys = std::get<ComponentSystem>(c.system);
                Vec yf(c.y0.begin(), c.y0.begin() + c.dim_fast);
                Vec ys(c.y0.begin() + c.dim_fast, c.y0.end());
                traj = integrate(m, sys, yf, ys, c.t0, c.tf, H, inner);
            }
        } catch (const std::runtime_error& err) {
            rep.failed = true;
            rep.failure = err.what();
            break;
        }
        ConvergenceRow row;
        row.H = H;
        row.error = c.error_at_tf(traj.y.back());
        // coarsest level and floor-contaminated rows are excluded from the fit
        row.floor_limited = level == 0 || row.error <= 100.0 * inner.rel_tol;
        rep.rows.push_back(row);
    }
    rep.observed_order = fit_observed_order(rep.rows);
    return rep;
}

namespace {

double rms_diff(const Vec& a, const Vec& b)
{
    Vec d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        d[i] = a[i] - b[i];
    return rms_norm(d);
}

} // namespace

ConvergenceCase make_kpr_case(const KprParams& p, double tf)
{
    KprProblem prob = kpr(p);
    ConvergenceCase c;
    c.problem = "kpr";
    c.system = prob.system;
    c.y0 = prob.yf0;
    c.y0.insert(c.y0.end(), prob.ys0.begin(), prob.ys0.end());
    c.dim_fast = 1;
    c.tf = tf;
    auto exact = prob.exact;
    c.error_at_tf = [exact, tf](const Vec& y) {
        auto [yf, ys] = exact(tf);
        return rms_diff(y, Vec{yf, ys});
    };
    return c;
}

ConvergenceCase make_gray_scott_case(const GrayScottParams& p, double tf, double reference_tol)
{
    GrayScottProblem prob = gray_scott(p);
    ConvergenceCase c;
    c.problem = "gray-scott";
    c.system = prob.system;
    c.y0 = prob.y0;
    c.tf = tf;

    // reference: the unsplit system solved adaptively once, shared per case
    auto sys = prob.system;
    auto reference = std::make_shared<Vec>();
    auto tol = reference_tol;
    auto y0 = prob.y0;
    c.error_at_tf = [sys, reference, tol, y0, tf](const Vec& y) {
        if (reference->empty()) {
            Vec dy_s(y0.size());
            InnerRhs full = [&sys, &dy_s](double t, const Vec& v, Vec& dv) {
                sys.f_slow(t, v, dv);
                sys.f_fast(t, v, dy_s);
                for (std::size_t i = 0; i < dv.size(); ++i)
                    dv[i] += dy_s[i];
            };
            InnerSolveConfig cfg;
            cfg.rel_tol = cfg.abs_tol = tol;
            InnerRunStats stats;
            *reference = solve_inner_ode(full, y0, tf, cfg, stats);
        }
        return rms_diff(y, *reference);
    };
    return c;
}

ConvergenceCase make_linear_scalar_case(double lambda_f, double lambda_s, double tf)
{
    ConvergenceCase c;
    c.problem = "linear-scalar";
    c.system = linear_scalar(lambda_f, lambda_s);
    c.y0 = {1.0};
    c.tf = tf;
    double yex = std::exp((lambda_f + lambda_s) * tf);
    c.error_at_tf = [yex](const Vec& y) { return std::abs(y[0] - yex); };
    return c;
}

ConvergenceCase make_linear_2d_case(const CoupledTestProblem& p, double tf)
{
    Linear2dProblem prob = linear_2d(p);
    ConvergenceCase c;
    c.problem = "linear-2d";
    c.system = prob.system;
    c.y0 = {1.0, 1.0};
    c.dim_fast = 1;
    c.tf = tf;
    Mat2d f = prob.flow(tf);
    Vec yex = {f[0][0] + f[0][1], f[1][0] + f[1][1]};
    c.error_at_tf = [yex](const Vec& y) { return rms_diff(y, yex); };
    return c;
}

} // namespace mrigark
