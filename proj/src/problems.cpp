#include "mrigark/problems.hpp"

#include <cmath>
#include <memory>

namespace mrigark {

GrayScottProblem gray_scott(const GrayScottParams& params)
{
    if (params.n < 4)
        throw ProblemError("gray-scott grid needs n >= 4");
    if (params.eps_u <= 0 || params.eps_v <= 0 || params.feed <= 0 || params.kill <= 0)
        throw ProblemError("gray-scott parameters must be positive");

    const int n = params.n;
    const std::size_t cells = static_cast<std::size_t>(n) * n;
    const double inv_h2 = double(n) * double(n);
    const double f = params.feed;
    const double k = params.kill;
    const double eu = params.eps_u * inv_h2;
    const double ev = params.eps_v * inv_h2;

    auto idx = [n](int ix, int iy) {
        return static_cast<std::size_t>((ix + n) % n) + static_cast<std::size_t>(n) * ((iy + n) % n);
    };

    GrayScottProblem prob;
    prob.params = params;
    prob.system.dimension = 2 * cells;
    prob.system.f_slow = [=](double, const Vec& y, Vec& dy) {
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                std::size_t c = idx(ix, iy);
                double lap_u = y[idx(ix + 1, iy)] + y[idx(ix - 1, iy)] + y[idx(ix, iy + 1)] +
                               y[idx(ix, iy - 1)] - 4.0 * y[c];
                double lap_v = y[cells + idx(ix + 1, iy)] + y[cells + idx(ix - 1, iy)] +
                               y[cells + idx(ix, iy + 1)] + y[cells + idx(ix, iy - 1)] -
                               4.0 * y[cells + c];
                dy[c] = eu * lap_u;
                dy[cells + c] = ev * lap_v;
            }
    };
    prob.system.f_fast = [=](double, const Vec& y, Vec& dy) {
        for (std::size_t c = 0; c < cells; ++c) {
            double u = y[c];
            double v = y[cells + c];
            double uvv = u * v * v;
            dy[c] = -uvv + f * (1.0 - u);
            dy[cells + c] = uvv - (f + k) * v;
        }
    };
    // constant diffusion operator, assembled on first request
    auto cache = std::make_shared<DMat>();
    prob.system.jac_slow = [=](double, const Vec&, DMat& out) mutable {
        if (cache->rows == 0) {
            *cache = DMat(2 * cells, 2 * cells);
            for (int iy = 0; iy < n; ++iy)
                for (int ix = 0; ix < n; ++ix) {
                    std::size_t c = idx(ix, iy);
                    for (auto [jx, jy] : {std::pair{ix + 1, iy}, {ix - 1, iy}, {ix, iy + 1},
                                          {ix, iy - 1}}) {
                        (*cache)(c, idx(jx, jy)) += eu;
                        (*cache)(cells + c, cells + idx(jx, jy)) += ev;
                    }
                    (*cache)(c, c) -= 4.0 * eu;
                    (*cache)(cells + c, cells + c) -= 4.0 * ev;
                }
        }
        out = *cache;
    };

    prob.y0.assign(2 * cells, 0.0);
    for (std::size_t c = 0; c < cells; ++c)
        prob.y0[c] = 1.0;
    for (int iy = n / 4; iy < 3 * n / 4; ++iy)
        for (int ix = n / 4; ix < 3 * n / 4; ++ix) {
            prob.y0[idx(ix, iy)] = 0.5;
            prob.y0[cells + idx(ix, iy)] = 0.25;
        }
    return prob;
}

KprProblem kpr(const KprParams& params)
{
    if (!(params.lambda_f < 0.0) || !(params.lambda_s < 0.0))
        throw ProblemError("kpr rates must be negative");
    if (!(params.xi > 0.0 && params.xi < 1.0))
        throw ProblemError("kpr coupling xi must lie in (0,1)");
    if (!(params.omega > 0.0))
        throw ProblemError("kpr forcing frequency must be positive");

    const double lf = params.lambda_f;
    const double ls = params.lambda_s;
    const double xi = params.xi;
    const double al = params.alpha;
    const double om = params.omega;
    const double o00 = lf;
    const double o01 = (1.0 - xi) * (lf - ls) / al;
    const double o10 = -al * xi * (lf - ls);
    const double o11 = ls;

    auto guard = [](double x) {
        if (!(x > 0.0))
            throw ProblemError("kpr state left the positive domain");
    };
    auto gf = [om, guard](double t, double yf) {
        guard(yf);
        return (-3.0 + yf * yf - std::cos(om * t)) / (2.0 * yf);
    };
    auto gs = [guard](double t, double ys) {
        guard(ys);
        return (-2.0 + ys * ys - std::cos(t)) / (2.0 * ys);
    };

    KprProblem prob;
    prob.params = params;
    prob.system.dim_fast = 1;
    prob.system.dim_slow = 1;
    prob.system.f_fast = [=](double t, const Vec& yf, const Vec& ys, Vec& out) {
        out[0] = o00 * gf(t, yf[0]) + o01 * gs(t, ys[0]) -
                 om * std::sin(om * t) / (2.0 * yf[0]);
    };
    prob.system.f_slow = [=](double t, const Vec& yf, const Vec& ys, Vec& out) {
        out[0] = o10 * gf(t, yf[0]) + o11 * gs(t, ys[0]) + -std::sin(t) / (2.0 * ys[0]);
    };
    prob.system.jac_slow_ys = [=](double t, const Vec&, const Vec& ys, DMat& out) {
        guard(ys[0]);
        double y = ys[0];
        double dgs = (y * y + 2.0 + std::cos(t)) / (2.0 * y * y);
        out(0, 0) = o11 * dgs + std::sin(t) / (2.0 * y * y);
    };
    prob.exact = [om](double t) {
        return std::make_pair(std::sqrt(3.0 + std::cos(om * t)), std::sqrt(2.0 + std::cos(t)));
    };
    auto [yf0, ys0] = prob.exact(0.0);
    prob.yf0 = {yf0};
    prob.ys0 = {ys0};
    return prob;
}

AdditiveSystem linear_scalar(double lambda_f, double lambda_s)
{
    AdditiveSystem sys;
    sys.dimension = 1;
    sys.f_fast = [lambda_f](double, const Vec& y, Vec& dy) { dy[0] = lambda_f * y[0]; };
    sys.f_slow = [lambda_s](double, const Vec& y, Vec& dy) { dy[0] = lambda_s * y[0]; };
    sys.jac_slow = [lambda_s](double, const Vec&, DMat& j) { j(0, 0) = lambda_s; };
    return sys;
}

Linear2dProblem linear_2d(const CoupledTestProblem& problem)
{
    if (problem.lambda_f.imag() != 0.0 || problem.lambda_s.imag() != 0.0 ||
        problem.alpha_scale.imag() != 0.0)
        throw ProblemError("linear-2d requires real rates and scaling");
    const double lf = problem.lambda_f.real();
    const double ls = problem.lambda_s.real();
    const double xi = problem.xi;
    const double al = problem.alpha_scale.real();
    const double o00 = lf;
    const double o01 = (1.0 - xi) * (lf - ls) / al;
    const double o10 = -al * xi * (lf - ls);
    const double o11 = ls;

    Linear2dProblem prob;
    prob.problem = problem;
    prob.system.dim_fast = 1;
    prob.system.dim_slow = 1;
    prob.system.f_fast = [=](double, const Vec& yf, const Vec& ys, Vec& out) {
        out[0] = o00 * yf[0] + o01 * ys[0];
    };
    prob.system.f_slow = [=](double, const Vec& yf, const Vec& ys, Vec& out) {
        out[0] = o10 * yf[0] + o11 * ys[0];
    };
    prob.system.jac_slow_ys = [=](double, const Vec&, const Vec&, DMat& j) { j(0, 0) = o11; };

    prob.flow = [=](double t) -> Mat2d {
        const double mu1 = xi * lf + (1.0 - xi) * ls;
        const double mu2 = (1.0 - xi) * lf + xi * ls;
        Mat2d e;
        if (std::abs(mu1 - mu2) < 1e-12 * std::max(std::abs(mu1), 1.0)) {
            // equal eigenvalues: exp(tO) = e^{mu t}(I + t(O - mu I))
            double mu = 0.5 * (mu1 + mu2);
            double emt = std::exp(mu * t);
            e[0][0] = emt * (1.0 + t * (o00 - mu));
            e[0][1] = emt * t * o01;
            e[1][0] = emt * t * o10;
            e[1][1] = emt * (1.0 + t * (o11 - mu));
            return e;
        }
        // eigenvectors (-1/al, 1) and (-(1-xi)/al, xi)
        const double v00 = -1.0 / al, v01 = -(1.0 - xi) / al;
        const double v10 = 1.0, v11 = xi;
        const double det = v00 * v11 - v01 * v10;
        const double i00 = v11 / det, i01 = -v01 / det;
        const double i10 = -v10 / det, i11 = v00 / det;
        const double e1 = std::exp(mu1 * t), e2 = std::exp(mu2 * t);
        e[0][0] = v00 * e1 * i00 + v01 * e2 * i10;
        e[0][1] = v00 * e1 * i01 + v01 * e2 * i11;
        e[1][0] = v10 * e1 * i00 + v11 * e2 * i10;
        e[1][1] = v10 * e1 * i01 + v11 * e2 * i11;
        return e;
    };
    return prob;
}

} // namespace mrigark
