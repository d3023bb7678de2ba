#include "mrigark/integrator.hpp"

#include <algorithm>
#include <cmath>

namespace mrigark {

namespace {

constexpr int newton_max_iters = 50;
constexpr double newton_rel_tol = 1e-10;
constexpr double newton_abs_tol = 1e-12;

// ---- small dense LU with partial pivoting ----

struct LU {
    DMat m;
    std::vector<std::size_t> piv;

    void factor(DMat in)
    {
        m = std::move(in);
        const std::size_t n = m.rows;
        piv.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            piv[i] = i;
        for (std::size_t col = 0; col < n; ++col) {
            std::size_t p = col;
            for (std::size_t r = col + 1; r < n; ++r)
                if (std::abs(m(r, col)) > std::abs(m(p, col)))
                    p = r;
            if (m(p, col) == 0.0)
                throw IntegratorError("singular Newton matrix");
            if (p != col) {
                for (std::size_t j = 0; j < n; ++j)
                    std::swap(m(p, j), m(col, j));
                std::swap(piv[p], piv[col]);
            }
            for (std::size_t r = col + 1; r < n; ++r) {
                double f = m(r, col) / m(col, col);
                m(r, col) = f;
                for (std::size_t j = col + 1; j < n; ++j)
                    m(r, j) -= f * m(col, j);
            }
        }
    }

    Vec solve(const Vec& b) const
    {
        const std::size_t n = m.rows;
        Vec x(n);
        for (std::size_t i = 0; i < n; ++i)
            x[i] = b[piv[i]];
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t j = 0; j < i; ++j)
                x[i] -= m(i, j) * x[j];
        for (std::size_t i = n; i-- > 0;) {
            for (std::size_t j = i + 1; j < n; ++j)
                x[i] -= m(i, j) * x[j];
            x[i] /= m(i, i);
        }
        return x;
    }
};

void axpy(Vec& y, double a, const Vec& x)
{
    for (std::size_t i = 0; i < y.size(); ++i)
        y[i] += a * x[i];
}

/// Forcing polynomial coefficients P_k = sum_j row_k[j] * rates[j].
std::vector<Vec> forcing_polynomial(const GammaStack<double>& stack, std::size_t stage,
                                    const std::vector<Vec>& rates, std::size_t n, bool hat_row)
{
    std::vector<Vec> P(stack.gamma.size(), Vec(n, 0.0));
    for (std::size_t k = 0; k < stack.gamma.size(); ++k) {
        for (std::size_t j = 0; j < rates.size(); ++j) {
            double w = hat_row ? (k < stack.gamma_hat.size() ? stack.gamma_hat[k][j] : 0.0)
                               : stack.gamma[k][stage][j];
            if (w != 0.0)
                axpy(P[k], w, rates[j]);
        }
    }
    return P;
}

void eval_forcing(const std::vector<Vec>& P, double tau, Vec& out)
{
    std::fill(out.begin(), out.end(), 0.0);
    double power = 1.0;
    for (const Vec& pk : P) {
        axpy(out, power, pk);
        power *= tau;
    }
}

/// Integrated forcing sum_k P_k tau^{k+1}/(k+1), the frozen slow argument of
/// the component-form fast stage.
void eval_forcing_integral(const std::vector<Vec>& P, double tau, Vec& out)
{
    std::fill(out.begin(), out.end(), 0.0);
    double power = tau;
    for (std::size_t k = 0; k < P.size(); ++k) {
        axpy(out, power / double(k + 1), P[k]);
        power *= tau;
    }
}

struct NewtonProblem {
    // residual G(Y) = Y - r - kappa * f(Y); jac(Y) fills df/dY
    std::function<void(const Vec&, Vec&)> f;
    std::function<void(const Vec&, DMat&)> jac; // optional
    double kappa = 0.0;
    Vec r;
};

Vec newton_solve(const NewtonProblem& p, Vec y, StepStats& stats, long& f_calls)
{
    const std::size_t n = y.size();
    Vec fy(n), g(n), dy;
    const double sqrt_eps = std::sqrt(2.220446049250313e-16);

    auto fill_jacobian = [&](const Vec& at, DMat& out) {
        if (p.jac) {
            p.jac(at, out);
            return;
        }
        Vec base(n), pert(n), shifted = at;
        p.f(at, base);
        ++f_calls;
        for (std::size_t j = 0; j < n; ++j) {
            double dlt = sqrt_eps * std::max(1.0, std::abs(at[j]));
            shifted[j] = at[j] + dlt;
            p.f(shifted, pert);
            ++f_calls;
            shifted[j] = at[j];
            for (std::size_t i = 0; i < n; ++i)
                out(i, j) = (pert[i] - base[i]) / dlt;
        }
    };

    LU lu;
    DMat jac(n, n), iter_matrix(n, n);
    auto refactor = [&](const Vec& at) {
        fill_jacobian(at, jac);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                iter_matrix(i, j) = (i == j ? 1.0 : 0.0) - p.kappa * jac(i, j);
        lu.factor(iter_matrix);
    };

    refactor(y);
    double prev_norm = -1.0;
    double res_norm = 0.0;
    for (int it = 0; it < newton_max_iters; ++it) {
        p.f(y, fy);
        ++f_calls;
        for (std::size_t i = 0; i < n; ++i)
            g[i] = y[i] - p.r[i] - p.kappa * fy[i];
        for (double& gi : g)
            gi = -gi;
        dy = lu.solve(g);
        double norm = rms_norm(dy);
        res_norm = norm;
        axpy(y, 1.0, dy);
        ++stats.newton_iters;
        if (norm <= std::max(newton_abs_tol, newton_rel_tol * rms_norm(y)))
            return y;
        if (prev_norm > 0.0 && norm > 0.5 * prev_norm)
            refactor(y); // slow convergence: refresh the frozen Jacobian
        prev_norm = norm;
    }
    throw NewtonError("implicit slow stage did not converge", res_norm);
}

} // namespace

Vec solve_modified_fast_ode(const MriGarkMethod<double>& m, std::size_t stage,
                            const std::vector<Vec>& slow_rates, const Vec& v0, double t, double H,
                            const AdditiveSystem& sys, const InnerSolveConfig& inner,
                            StepStats& stats)
{
    const std::size_t n = sys.dimension;
    const double dc = m.base.dc[stage];
    const double T_i = t + m.base.c[stage] * H;
    std::vector<Vec> P = forcing_polynomial(m.gammas, stage, slow_rates, n, false);

    Vec forcing(n);
    InnerRunStats irs;
    auto rhs = [&](double theta, const Vec& v, Vec& dv) {
        sys.f_fast(T_i + dc * theta, v, dv);
        for (double& x : dv)
            x *= dc;
        eval_forcing(P, theta / H, forcing);
        axpy(dv, 1.0, forcing);
    };
    Vec out = solve_inner_ode(rhs, v0, H, inner, irs);
    stats.fast_rhs += irs.rhs_calls;
    stats.rejected_inner_steps += irs.rejected;
    return out;
}

Vec solve_implicit_slow_stage(const MriGarkMethod<double>& m, std::size_t stage,
                              const AdditiveSystem& sys, const std::vector<Vec>& slow_rates,
                              const Vec& y_stage, double t, double H, StepStats& stats)
{
    const std::size_t n = sys.dimension;
    Matrix<double> gbar = gamma_bar(m.gammas);
    const double T_next = t + m.base.c[stage + 1] * H;

    NewtonProblem np;
    np.kappa = H * gbar[stage][stage + 1];
    np.r = y_stage;
    for (std::size_t j = 0; j <= stage; ++j)
        if (gbar[stage][j] != 0.0)
            axpy(np.r, H * gbar[stage][j], slow_rates[j]);
    long f_calls = 0;
    np.f = [&](const Vec& y, Vec& fy) { sys.f_slow(T_next, y, fy); };
    if (sys.jac_slow)
        np.jac = [&](const Vec& y, DMat& j) {
            j = DMat(n, n);
            sys.jac_slow(T_next, y, j);
        };
    Vec out = newton_solve(np, np.r, stats, f_calls);
    stats.slow_rhs += f_calls;
    return out;
}

StepResult step_additive(const MriGarkMethod<double>& m, const AdditiveSystem& sys, double t,
                         const Vec& y, double H, const InnerSolveConfig& inner)
{
    if (H <= 0.0)
        throw IntegratorError("step size must be positive");
    const std::size_t s = m.stages();
    const std::size_t n = sys.dimension;
    Matrix<double> gbar = gamma_bar(m.gammas);

    StepResult res;
    std::vector<Vec> Y(s + 1);
    std::vector<Vec> F(s, Vec(n));
    Y[0] = y;

    for (std::size_t i = 0; i < s; ++i) {
        sys.f_slow(t + m.base.c[i] * H, Y[i], F[i]);
        ++res.stats.slow_rhs;
        if (m.base.dc[i] == 0.0) {
            if (i + 1 < s && gbar[i][i + 1] != 0.0) {
                Y[i + 1] = solve_implicit_slow_stage(m, i, sys, F, Y[i], t, H, res.stats);
            } else {
                Y[i + 1] = Y[i];
                for (std::size_t j = 0; j <= i; ++j)
                    if (gbar[i][j] != 0.0)
                        axpy(Y[i + 1], H * gbar[i][j], F[j]);
            }
        } else {
            Y[i + 1] = solve_modified_fast_ode(m, i, F, Y[i], t, H, sys, inner, res.stats);
        }
    }
    res.y_next = Y[s];

    if (m.gammas.has_embedded()) {
        const std::size_t last = s - 1;
        if (m.base.dc[last] == 0.0) {
            Vec ghb = gamma_hat_bar(m.gammas);
            res.y_embedded = Y[last];
            for (std::size_t j = 0; j < s; ++j)
                if (ghb[j] != 0.0)
                    axpy(res.y_embedded, H * ghb[j], F[j]);
        } else {
            std::vector<Vec> P = forcing_polynomial(m.gammas, last, F, n, true);
            Vec forcing(n);
            const double dc = m.base.dc[last];
            const double T_i = t + m.base.c[last] * H;
            InnerRunStats irs;
            auto rhs = [&](double theta, const Vec& v, Vec& dv) {
                sys.f_fast(T_i + dc * theta, v, dv);
                for (double& x : dv)
                    x *= dc;
                eval_forcing(P, theta / H, forcing);
                axpy(dv, 1.0, forcing);
            };
            res.y_embedded = solve_inner_ode(rhs, Y[last], H, inner, irs);
            res.stats.fast_rhs += irs.rhs_calls;
            res.stats.rejected_inner_steps += irs.rejected;
        }
        Vec diff = res.y_next;
        axpy(diff, -1.0, res.y_embedded);
        res.error_estimate = rms_norm(diff);
    } else {
        res.y_embedded = res.y_next;
    }
    return res;
}

StepResult step_component(const MriGarkMethod<double>& m, const ComponentSystem& sys, double t,
                          const Vec& y_f, const Vec& y_s, double H, const InnerSolveConfig& inner)
{
    if (H <= 0.0)
        throw IntegratorError("step size must be positive");
    const std::size_t s = m.stages();
    const std::size_t ns = sys.dim_slow;
    Matrix<double> gbar = gamma_bar(m.gammas);

    StepResult res;
    std::vector<Vec> Yf(s + 1), Ys(s + 1);
    std::vector<Vec> F(s, Vec(ns));
    Yf[0] = y_f;
    Ys[0] = y_s;

    auto fast_solve = [&](std::size_t stage, const Vec& v0, const Vec& ys_base,
                          const std::vector<Vec>& rates, bool hat_row) {
        std::vector<Vec> P = forcing_polynomial(m.gammas, stage, rates, ns, hat_row);
        const double dc = m.base.dc[stage];
        const double T_i = t + m.base.c[stage] * H;
        Vec integral(ns), ys_frozen(ns);
        InnerRunStats irs;
        auto rhs = [&](double theta, const Vec& v, Vec& dv) {
            eval_forcing_integral(P, theta / H, integral);
            for (std::size_t d = 0; d < ns; ++d)
                ys_frozen[d] = ys_base[d] + H * integral[d];
            sys.f_fast(T_i + dc * theta, v, ys_frozen, dv);
            for (double& x : dv)
                x *= dc;
        };
        Vec out = solve_inner_ode(rhs, v0, H, inner, irs);
        res.stats.fast_rhs += irs.rhs_calls;
        res.stats.rejected_inner_steps += irs.rejected;
        return out;
    };

    for (std::size_t i = 0; i < s; ++i) {
        sys.f_slow(t + m.base.c[i] * H, Yf[i], Ys[i], F[i]);
        ++res.stats.slow_rhs;

        Yf[i + 1] = (m.base.dc[i] == 0.0) ? Yf[i] : fast_solve(i, Yf[i], Ys[i], F, false);

        if (i + 1 < s && gbar[i][i + 1] != 0.0) {
            // implicit in the slow variables only; the fast value is frozen
            NewtonProblem np;
            np.kappa = H * gbar[i][i + 1];
            np.r = Ys[i];
            for (std::size_t j = 0; j <= i; ++j)
                if (gbar[i][j] != 0.0)
                    axpy(np.r, H * gbar[i][j], F[j]);
            const double T_next = t + m.base.c[i + 1] * H;
            long f_calls = 0;
            np.f = [&](const Vec& ys, Vec& fy) { sys.f_slow(T_next, Yf[i + 1], ys, fy); };
            if (sys.jac_slow_ys)
                np.jac = [&](const Vec& ys, DMat& j) {
                    j = DMat(ns, ns);
                    sys.jac_slow_ys(T_next, Yf[i + 1], ys, j);
                };
            Ys[i + 1] = newton_solve(np, np.r, res.stats, f_calls);
            res.stats.slow_rhs += f_calls;
        } else {
            Ys[i + 1] = Ys[i];
            for (std::size_t j = 0; j <= i; ++j)
                if (gbar[i][j] != 0.0)
                    axpy(Ys[i + 1], H * gbar[i][j], F[j]);
        }
    }

    res.y_next = Yf[s];
    res.y_next.insert(res.y_next.end(), Ys[s].begin(), Ys[s].end());

    if (m.gammas.has_embedded()) {
        const std::size_t last = s - 1;
        Vec yf_hat;
        if (m.base.dc[last] == 0.0)
            yf_hat = Yf[last];
        else
            yf_hat = fast_solve(last, Yf[last], Ys[last], F, true);
        Vec ys_hat = Ys[last];
        Vec ghb = gamma_hat_bar(m.gammas);
        for (std::size_t j = 0; j < s; ++j)
            if (ghb[j] != 0.0)
                axpy(ys_hat, H * ghb[j], F[j]);
        res.y_embedded = yf_hat;
        res.y_embedded.insert(res.y_embedded.end(), ys_hat.begin(), ys_hat.end());
        Vec diff = res.y_next;
        axpy(diff, -1.0, res.y_embedded);
        res.error_estimate = rms_norm(diff);
    } else {
        res.y_embedded = res.y_next;
    }
    return res;
}

namespace {

template <class StepFn>
Trajectory integrate_impl(const Vec& y0, double t0, double tf, double H, StepFn step)
{
    if (!(tf > t0))
        throw IntegratorError("integrate requires tf > t0");
    if (H <= 0.0)
        throw IntegratorError("step size must be positive");

    Trajectory traj;
    traj.t.push_back(t0);
    traj.y.push_back(y0);

    double span = tf - t0;
    long nfull = static_cast<long>(std::floor(span / H + 1e-12));
    double tail = span - nfull * H;
    if (tail <= 1e-12 * std::max(1.0, span))
        tail = 0.0;

    double t = t0;
    Vec y = y0;
    long step_index = 0;
    auto advance = [&](double h) {
        StepResult r;
        try {
            r = step(t, y, h);
        } catch (const IntegratorError& err) {
            throw IntegratorError("step " + std::to_string(step_index) + " failed: " + err.what());
        }
        t += h;
        y = r.y_next;
        traj.t.push_back(t);
        traj.y.push_back(y);
        traj.error_estimates.push_back(r.error_estimate);
        traj.stats += r.stats;
        ++step_index;
    };
    for (long i = 0; i < nfull; ++i)
        advance(H);
    if (tail > 0.0)
        advance(tail);
    return traj;
}

} // namespace

Trajectory integrate(const MriGarkMethod<double>& m, const AdditiveSystem& sys, const Vec& y0,
                     double t0, double tf, double H, const InnerSolveConfig& inner)
{
    return integrate_impl(y0, t0, tf, H, [&](double t, const Vec& y, double h) {
        return step_additive(m, sys, t, y, h, inner);
    });
}

Trajectory integrate(const MriGarkMethod<double>& m, const ComponentSystem& sys, const Vec& yf0,
                     const Vec& ys0, double t0, double tf, double H, const InnerSolveConfig& inner)
{
    Vec y0 = yf0;
    y0.insert(y0.end(), ys0.begin(), ys0.end());
    return integrate_impl(y0, t0, tf, H, [&](double t, const Vec& y, double h) {
        Vec yf(y.begin(), y.begin() + sys.dim_fast);
        Vec ys(y.begin() + sys.dim_fast, y.end());
        return step_component(m, sys, t, yf, ys, h, inner);
    });
}

} // namespace mrigark
