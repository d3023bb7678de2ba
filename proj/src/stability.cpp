#include "mrigark/stability.hpp"

#include <cmath>
#include <limits>

namespace mrigark {

namespace {

constexpr double singular_tol = 1e-14;

struct PhiRow {
    // phi values at dc_i * z_f, or all zero in the fast-decay limit
    std::vector<Complex> v;
    Complex operator[](int k) const { return v[static_cast<std::size_t>(k)]; }
};

PhiRow stage_phis(double dc, Complex z_f, bool fast_limit, int kmax)
{
    PhiRow row;
    if (fast_limit && dc > 0.0) {
        row.v.assign(kmax + 1, Complex(0.0, 0.0));
        return row;
    }
    row.v = phi_row(kmax, dc * z_f);
    return row;
}

Complex scalar_stability_impl(const MriGarkMethod<double>& m, Complex z_f, Complex z_s,
                              bool fast_limit)
{
    const std::size_t s = m.stages();
    const int kmax = m.gammas.degree() + 1;
    std::vector<Complex> Y(s + 1);
    Y[0] = 1.0;
    for (std::size_t i = 0; i < s; ++i) {
        PhiRow phis = stage_phis(m.base.dc[i], z_f, fast_limit, kmax);
        auto mu = [&](std::size_t j) {
            Complex v = 0.0;
            for (std::size_t k = 0; k < m.gammas.gamma.size(); ++k)
                v += m.gammas.gamma[k][i][j] * phis[static_cast<int>(k) + 1];
            return v;
        };
        Complex rhs = phis[0] * Y[i];
        for (std::size_t j = 0; j <= i; ++j)
            rhs += z_s * mu(j) * Y[j];
        if (i + 1 < s) {
            Complex mu_diag = mu(i + 1);
            if (mu_diag != 0.0) {
                Complex denom = 1.0 - z_s * mu_diag;
                if (std::abs(denom) < singular_tol)
                    throw StabilityError("singular implicit stage factor");
                Y[i + 1] = rhs / denom;
                continue;
            }
        }
        Y[i + 1] = rhs;
    }
    return Y[s];
}

Mat2c matrix_stability_impl(const MriGarkMethod<double>& m, Complex z_f, Complex z_s, Complex w_s,
                            Complex w_f, bool fast_limit)
{
    const std::size_t s = m.stages();
    const int kmax = m.gammas.degree() + 2;
    Matrix<double> gbar = gamma_bar(m.gammas);

    // stage values as rows acting on (y_f, y_s)
    using Row = std::array<Complex, 2>;
    std::vector<Row> Yf(s + 1), Ys(s + 1);
    Yf[0] = {1.0, 0.0};
    Ys[0] = {0.0, 1.0};

    for (std::size_t i = 0; i < s; ++i) {
        const double dc = m.base.dc[i];
        PhiRow phis = stage_phis(dc, z_f, fast_limit, kmax);
        auto nu = [&](std::size_t j) {
            Complex v = 0.0;
            for (std::size_t k = 0; k < m.gammas.gamma.size(); ++k)
                v += m.gammas.gamma[k][i][j] / double(k + 1) * phis[static_cast<int>(k) + 2];
            return v;
        };
        Row yf_next{0.0, 0.0};
        for (int d = 0; d < 2; ++d)
            yf_next[d] = phis[0] * Yf[i][d] + dc * phis[1] * w_s * Ys[i][d];
        for (std::size_t j = 0; j <= i; ++j) {
            Complex nuv = nu(j);
            for (int d = 0; d < 2; ++d)
                yf_next[d] += w_s * dc * nuv * (w_f * Yf[j][d] + z_s * Ys[j][d]);
        }
        Yf[i + 1] = yf_next;

        Complex denom = 1.0;
        if (i + 1 < s && gbar[i][i + 1] != 0.0)
            denom = 1.0 - gbar[i][i + 1] * z_s;
        if (std::abs(denom) < singular_tol)
            throw StabilityError("singular implicit stage factor");
        Row ys_next{0.0, 0.0};
        for (int d = 0; d < 2; ++d) {
            Complex acc = Ys[i][d];
            for (std::size_t j = 0; j <= i && j < s; ++j)
                acc += gbar[i][j] * (w_f * Yf[j][d] + z_s * Ys[j][d]);
            if (i + 1 < s)
                acc += gbar[i][i + 1] * w_f * Yf[i + 1][d];
            ys_next[d] = acc / denom;
        }
        Ys[i + 1] = ys_next;
    }
    return {{{Yf[s][0], Yf[s][1]}, {Ys[s][0], Ys[s][1]}}};
}

} // namespace

Complex scalar_stability(const MriGarkMethod<double>& m, Complex z_f, Complex z_s)
{
    return scalar_stability_impl(m, z_f, z_s, false);
}

Complex scalar_stability_fast_limit(const MriGarkMethod<double>& m, Complex z_s)
{
    return scalar_stability_impl(m, 0.0, z_s, true);
}

Mat2c matrix_stability_z(const MriGarkMethod<double>& m, Complex z_f, Complex z_s, Complex w_s,
                         Complex w_f)
{
    return matrix_stability_impl(m, z_f, z_s, w_s, w_f, false);
}

Mat2c matrix_stability(const MriGarkMethod<double>& m, const CoupledTestProblem& p, double H)
{
    return matrix_stability_impl(m, H * p.lambda_f, H * p.lambda_s, H * p.eta_s(), H * p.eta_f(),
                                 false);
}

Complex base_stability(const MriGarkMethod<double>& m, Complex z)
{
    const std::size_t s = m.stages();
    // solve (I - z A) x = 1 by Gaussian elimination with partial pivoting
    std::vector<std::vector<Complex>> a(s, std::vector<Complex>(s + 1));
    for (std::size_t i = 0; i < s; ++i) {
        for (std::size_t j = 0; j < s; ++j)
            a[i][j] = (i == j ? 1.0 : 0.0) - z * m.base.A[i][j];
        a[i][s] = 1.0;
    }
    for (std::size_t col = 0; col < s; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < s; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col]))
                piv = r;
        if (std::abs(a[piv][col]) < 1e-300)
            throw StabilityError("singular base stability system");
        std::swap(a[col], a[piv]);
        for (std::size_t r = col + 1; r < s; ++r) {
            Complex f = a[r][col] / a[col][col];
            for (std::size_t j = col; j <= s; ++j)
                a[r][j] -= f * a[col][j];
        }
    }
    std::vector<Complex> x(s);
    for (std::size_t i = s; i-- > 0;) {
        Complex acc = a[i][s];
        for (std::size_t j = i + 1; j < s; ++j)
            acc -= a[i][j] * x[j];
        x[i] = acc / a[i][i];
    }
    Complex r = 1.0;
    for (std::size_t j = 0; j < s; ++j)
        r += z * m.base.b[j] * x[j];
    return r;
}

double spectral_radius(const Mat2c& m)
{
    Complex tr = m[0][0] + m[1][1];
    Complex det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    Complex disc = std::sqrt(tr * tr - 4.0 * det);
    Complex l1 = 0.5 * (tr + disc);
    Complex l2 = 0.5 * (tr - disc);
    return std::max(std::abs(l1), std::abs(l2));
}

WedgeSamples wedge_samples(double rho, double alpha_deg, ScanMode mode)
{
    if (alpha_deg < 0.0 || alpha_deg >= 90.0)
        throw StabilityError("wedge half-angle must lie in [0, 90) degrees");
    WedgeSamples out;
    out.points.push_back(Complex(0.0, 0.0));

    const bool infinite = std::isinf(rho);
    std::vector<double> radii;
    if (rho > 0.0) {
        const double cap = 1e6;
        const double r_hi = infinite ? cap : rho;
        const double r_lo = infinite ? 1e-2 : rho * 1e-6;
        // half-decade ladder, endpoints included
        int steps = static_cast<int>(std::round(2.0 * std::log10(r_hi / r_lo)));
        for (int i = 0; i <= steps; ++i)
            radii.push_back(r_lo * std::pow(10.0, 0.5 * i));
        radii.back() = r_hi;
    }

    // master angle ladder so sample sets nest across the tested alphas
    static const double master[] = {0.0, 10.0, 20.0, 30.0, 45.0, 60.0, 70.0, 80.0, 85.0};
    std::vector<double> angles{0.0};
    for (double a : master)
        if (a > 0.0 && a < alpha_deg)
            angles.push_back(a);
    if (alpha_deg > 0.0)
        angles.push_back(alpha_deg);

    const double pi = 3.14159265358979323846;
    for (double r : radii)
        for (double a : angles) {
            double th = pi - a * pi / 180.0;
            out.points.push_back(r * Complex(std::cos(th), std::sin(th)));
            if (a > 0.0)
                out.points.push_back(r * Complex(std::cos(th), -std::sin(th)));
        }
    out.include_fast_limit = infinite && mode == ScanMode::scalar;
    return out;
}

RegionScan scan_region(const MriGarkMethod<double>& m, RegionScan scan)
{
    const GridSpec& g = scan.grid;
    if (g.nre < 2 || g.nim < 2)
        throw StabilityError("scan grid needs at least 2 points per axis");
    WedgeSamples wedge = wedge_samples(scan.rho, scan.alpha_deg, scan.mode);
    if (wedge.points.size() < 8 && !(scan.rho == 0.0 || scan.alpha_deg == 0.0))
        throw StabilityError("wedge sampling too coarse");

    scan.values.assign(static_cast<std::size_t>(g.nre) * g.nim, 0.0);
    scan.member.assign(scan.values.size(), 0);

    for (int iy = 0; iy < g.nim; ++iy) {
        double im = g.im_min + (g.im_max - g.im_min) * iy / (g.nim - 1);
        for (int ix = 0; ix < g.nre; ++ix) {
            double re = g.re_min + (g.re_max - g.re_min) * ix / (g.nre - 1);
            Complex zs(re, im);
            double worst = 0.0;
            auto absorb = [&](double v) { worst = std::max(worst, v); };
            try {
                if (scan.mode == ScanMode::scalar) {
                    for (Complex zf : wedge.points)
                        absorb(std::abs(scalar_stability(m, zf, zs)));
                    if (wedge.include_fast_limit)
                        absorb(std::abs(scalar_stability_fast_limit(m, zs)));
                } else {
                    for (Complex zf : wedge.points) {
                        Complex diff = zf - zs;
                        Complex ws = (1.0 - scan.xi) * diff;
                        Complex wf = -scan.xi * diff;
                        absorb(spectral_radius(matrix_stability_z(m, zf, zs, ws, wf)));
                    }
                }
            } catch (const StabilityError&) {
                worst = std::numeric_limits<double>::infinity();
            }
            std::size_t idx = static_cast<std::size_t>(iy) * g.nre + ix;
            scan.values[idx] = worst;
            scan.member[idx] = worst <= 1.0 + region_membership_tol ? 1 : 0;
        }
    }
    return scan;
}

} // namespace mrigark
