#pragma once

#include "mrigark/tableau.hpp"

#include <string>
#include <vector>

namespace mrigark {

struct ConditionReport {
    std::string id;
    double lhs = 0;
    double rhs = 0;
    double residual = 0;
    bool pass = false;
};

inline bool all_pass(const std::vector<ConditionReport>& reports)
{
    for (const auto& r : reports)
        if (!r.pass)
            return false;
    return true;
}

/// B-series coefficients of the exact fast flow: closed forms
/// zeta_k = 1/((k+1)(k+2)), omega_k = 1/((k+1)(k+3)), xi_k = 1/((k+1)(k+2)(k+3)).
template <class T>
T bseries_zeta(int k)
{
    return T(1) / T((k + 1) * (k + 2));
}
template <class T>
T bseries_omega(int k)
{
    return T(1) / T((k + 1) * (k + 3));
}
template <class T>
T bseries_xi(int k)
{
    return T(1) / T((k + 1) * (k + 2) * (k + 3));
}

template <class T>
struct BSeriesTables {
    Vector<T> zeta, omega, xi;
};

template <class T>
BSeriesTables<T> bseries_tables(int kmax)
{
    BSeriesTables<T> t;
    for (int k = 0; k <= kmax; ++k) {
        t.zeta.push_back(bseries_zeta<T>(k));
        t.omega.push_back(bseries_omega<T>(k));
        t.xi.push_back(bseries_xi<T>(k));
    }
    return t;
}

namespace detail {

template <class T>
ConditionReport make_report(const std::string& id, const T& lhs, const T& rhs, double tol)
{
    ConditionReport r;
    r.id = id;
    r.lhs = to_double(lhs);
    r.rhs = to_double(rhs);
    T res = scalar_abs(lhs - rhs);
    r.residual = to_double(res);
    r.pass = res <= scalar_cast<T>(tol);
    return r;
}

template <class T>
T dot(const Vector<T>& u, const Vector<T>& v)
{
    T s(0);
    for (std::size_t i = 0; i < u.size(); ++i)
        s += u[i] * v[i];
    return s;
}

template <class T>
Vector<T> matvec(const Matrix<T>& a, const Vector<T>& v)
{
    Vector<T> out(a.size(), T(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j)
            out[i] += a[i][j] * v[j];
    return out;
}

template <class T>
Vector<T> elemwise(const Vector<T>& u, const Vector<T>& v)
{
    Vector<T> out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        out[i] = u[i] * v[i];
    return out;
}

} // namespace detail

/// frak_A = A + sum_k zeta_k Gamma^k, the fast-averaged slow coefficient
/// matrix entering the coupling conditions.
template <class T>
Matrix<T> frak_A(const MriGarkMethod<T>& m)
{
    const std::size_t s = m.stages();
    Matrix<T> out = m.base.A;
    for (std::size_t k = 0; k < m.gammas.gamma.size(); ++k) {
        T zk = bseries_zeta<T>(static_cast<int>(k));
        for (std::size_t i = 0; i < s; ++i)
            for (std::size_t j = 0; j < s; ++j)
                out[i][j] += zk * m.gammas.gamma[k][i][j];
    }
    return out;
}

/// Gamma^0 rows must sum to dc, Gamma^k rows to zero for k >= 1; one report
/// per (k, row). Hat rows obey the same sums for the last stage.
template <class T>
std::vector<ConditionReport> check_internal_consistency(const MriGarkMethod<T>& m, double tol)
{
    std::vector<ConditionReport> out;
    const std::size_t s = m.stages();
    for (std::size_t k = 0; k < m.gammas.gamma.size(); ++k) {
        for (std::size_t i = 0; i < s; ++i) {
            T sum(0);
            for (std::size_t j = 0; j < s; ++j)
                sum += m.gammas.gamma[k][i][j];
            T want = (k == 0) ? m.base.dc[i] : T(0);
            out.push_back(detail::make_report(
                "ic.k" + std::to_string(k) + ".row" + std::to_string(i + 1), sum, want, tol));
        }
    }
    for (std::size_t k = 0; k < m.gammas.gamma_hat.size(); ++k) {
        T sum(0);
        for (std::size_t j = 0; j < s; ++j)
            sum += m.gammas.gamma_hat[k][j];
        T want = (k == 0) ? m.base.dc[s - 1] : T(0);
        out.push_back(detail::make_report("ic.k" + std::to_string(k) + ".hat", sum, want, tol));
    }
    return out;
}

/// Classical Runge-Kutta conditions of the base tableau through order p
/// (p <= 4), for the main weights and, when present, the embedded weights
/// checked against the embedded order.
template <class T>
std::vector<ConditionReport> check_base_order(const MriGarkMethod<T>& m, int p, double tol)
{
    if (p < 1 || p > 4)
        throw TableauError("base order check supports p in 1..4");
    using detail::dot;
    using detail::elemwise;
    using detail::matvec;
    const std::size_t s = m.stages();
    const Vector<T>& c = m.base.c;
    Vector<T> ones(s, T(1));
    Vector<T> c2 = elemwise(c, c);
    Vector<T> c3 = elemwise(c2, c);
    Vector<T> Ac = matvec(m.base.A, c);

    auto run = [&](const Vector<T>& b, const std::string& tag, int order) {
        std::vector<ConditionReport> out;
        if (order >= 1)
            out.push_back(detail::make_report(tag + ".1.sum", dot(b, ones), T(1), tol));
        if (order >= 2)
            out.push_back(detail::make_report(tag + ".2.bc", dot(b, c), T(1) / 2, tol));
        if (order >= 3) {
            out.push_back(detail::make_report(tag + ".3.bc2", dot(b, c2), T(1) / 3, tol));
            out.push_back(detail::make_report(tag + ".3.bAc", dot(b, Ac), T(1) / 6, tol));
        }
        if (order >= 4) {
            out.push_back(detail::make_report(tag + ".4.bc3", dot(b, c3), T(1) / 4, tol));
            out.push_back(
                detail::make_report(tag + ".4.bcAc", dot(b, elemwise(c, Ac)), T(1) / 8, tol));
            out.push_back(
                detail::make_report(tag + ".4.bAc2", dot(b, matvec(m.base.A, c2)), T(1) / 12, tol));
            out.push_back(
                detail::make_report(tag + ".4.bAAc", dot(b, matvec(m.base.A, Ac)), T(1) / 24, tol));
        }
        return out;
    };

    std::vector<ConditionReport> out = run(m.base.b, "base.b", p);
    if (m.base.b_hat) {
        int ep = std::min(p, m.embedded_order);
        if (ep >= 1) {
            auto hat = run(*m.base.b_hat, "base.bhat", ep);
            out.insert(out.end(), hat.begin(), hat.end());
        }
    }
    return out;
}

/// Third order coupling: dc^T frak_A c = 1/6.
template <class T>
ConditionReport check_coupling_order3(const MriGarkMethod<T>& m, double tol)
{
    using detail::dot;
    using detail::matvec;
    Matrix<T> fa = frak_A(m);
    T lhs = dot(m.base.dc, matvec(fa, m.base.c));
    return detail::make_report("coupling3", lhs, T(1) / 6, tol);
}

/// z[i] = c[i+1]^2 - c[i]^2 with the virtual abscissa c[s] = 1.
template <class T>
Vector<T> coupling_z_vector(const MriGarkMethod<T>& m)
{
    const std::size_t s = m.stages();
    Vector<T> z(s);
    for (std::size_t i = 0; i < s; ++i) {
        T next = (i + 1 < s) ? m.base.c[i + 1] : T(1);
        z[i] = next * next - m.base.c[i] * m.base.c[i];
    }
    return z;
}

/// d[i] = dc[i] * (1 - sum_{l<=i} b[l]).
template <class T>
Vector<T> coupling_d_vector(const MriGarkMethod<T>& m)
{
    const std::size_t s = m.stages();
    Vector<T> d(s);
    T partial(0);
    for (std::size_t i = 0; i < s; ++i) {
        partial += m.base.b[i];
        d[i] = m.base.dc[i] * (T(1) - partial);
    }
    return d;
}

/// t[i] = sum_{j>i} dc[j]^2.
template <class T>
Vector<T> coupling_t_vector(const MriGarkMethod<T>& m)
{
    const std::size_t s = m.stages();
    Vector<T> t(s, T(0));
    for (std::size_t i = s; i-- > 0;) {
        if (i + 1 < s)
            t[i] = t[i + 1] + m.base.dc[i + 1] * m.base.dc[i + 1];
    }
    return t;
}

/// The five fourth order coupling conditions (values 1/8, 1/12, 1/24, 1/24,
/// 1/24). With include_auxiliary the conditions that hold automatically for
/// order-4 base methods with c1 = 0 are evaluated as well, reported with an
/// "aux" prefix.
template <class T>
std::vector<ConditionReport> check_coupling_order4(const MriGarkMethod<T>& m, double tol,
                                                   bool include_auxiliary = false)
{
    using detail::dot;
    using detail::elemwise;
    using detail::matvec;
    const std::size_t s = m.stages();
    const Vector<T>& c = m.base.c;
    const Vector<T>& dc = m.base.dc;
    const Vector<T>& b = m.base.b;
    Vector<T> c2 = elemwise(c, c);
    Matrix<T> fa = frak_A(m);
    Vector<T> z = coupling_z_vector(m);
    Vector<T> d = coupling_d_vector(m);
    Vector<T> t = coupling_t_vector(m);

    std::vector<ConditionReport> out;

    // 4.A:  1/2 z^T A c + sum_k (dc x (zeta_k c + omega_k dc))^T Gamma^k c = 1/8
    T a_lhs = dot(z, matvec(m.base.A, c)) / 2;
    for (std::size_t k = 0; k < m.gammas.gamma.size(); ++k) {
        T zk = bseries_zeta<T>(static_cast<int>(k));
        T wk = bseries_omega<T>(static_cast<int>(k));
        Vector<T> gc = matvec(m.gammas.gamma[k], c);
        for (std::size_t i = 0; i < s; ++i)
            a_lhs += dc[i] * (zk * c[i] + wk * dc[i]) * gc[i];
    }
    out.push_back(detail::make_report("coupling4.A", a_lhs, T(1) / 8, tol));

    // 4.C:  dc^T frak_A c^2 = 1/12
    out.push_back(detail::make_report("coupling4.C", dot(dc, matvec(fa, c2)), T(1) / 12, tol));

    // 4.F:  d^T frak_A c = 1/24
    out.push_back(detail::make_report("coupling4.F", dot(d, matvec(fa, c)), T(1) / 24, tol));

    // 4.H:  (dc^2)^T (A/2 + sum_k xi_k Gamma^k) c + t^T frak_A c = 1/24
    Matrix<T> half_xi = m.base.A;
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j)
            half_xi[i][j] /= 2;
    for (std::size_t k = 0; k < m.gammas.gamma.size(); ++k) {
        T xk = bseries_xi<T>(static_cast<int>(k));
        for (std::size_t i = 0; i < s; ++i)
            for (std::size_t j = 0; j < s; ++j)
                half_xi[i][j] += xk * m.gammas.gamma[k][i][j];
    }
    T h_lhs = dot(elemwise(dc, dc), matvec(half_xi, c)) + dot(t, matvec(fa, c));
    out.push_back(detail::make_report("coupling4.H", h_lhs, T(1) / 24, tol));

    // 4.I:  dc^T frak_A A c = 1/24
    out.push_back(
        detail::make_report("coupling4.I", dot(dc, matvec(fa, matvec(m.base.A, c))), T(1) / 24, tol));

    if (include_auxiliary) {
        Vector<T> c3 = elemwise(c2, c);
        Vector<T> Ac = matvec(m.base.A, c);
        out.push_back(detail::make_report("coupling4.aux.b", dot(b, c3) / 2, T(1) / 8, tol));
        T bc3_tail(0);
        for (std::size_t i = 0; i < s; ++i) {
            T tail(0);
            for (std::size_t l = i + 1; l < s; ++l)
                tail += b[l];
            T next = (i + 1 < s) ? c[i + 1] : T(1);
            bc3_tail += tail * (next * next * next - c[i] * c[i] * c[i]);
        }
        out.push_back(detail::make_report("coupling4.aux.d", bc3_tail / 3, T(1) / 12, tol));
        out.push_back(
            detail::make_report("coupling4.aux.e", dot(b, matvec(m.base.A, c2)) / 2, T(1) / 24, tol));
        out.push_back(detail::make_report("coupling4.aux.g", bc3_tail / 6, T(1) / 24, tol));
        out.push_back(
            detail::make_report("coupling4.aux.j", dot(dc, matvec(fa, c2)) / 2, T(1) / 24, tol));
    }
    return out;
}

/// The base tableau reconstructed from the integrated gammas must equal the
/// stored one entrywise (A, b, c, and b_hat when embedded rows exist).
template <class T>
std::vector<ConditionReport> check_gamma_base_consistency(const MriGarkMethod<T>& m, double tol)
{
    const std::size_t s = m.stages();
    BaseTableau<T> rec = reconstruct_base(m.gammas, s);
    std::vector<ConditionReport> out;
    T amax(0), bmax(0), cmax(0);
    for (std::size_t i = 0; i < s; ++i) {
        cmax = std::max(cmax, scalar_abs(rec.c[i] - m.base.c[i]));
        bmax = std::max(bmax, scalar_abs(rec.b[i] - m.base.b[i]));
        for (std::size_t j = 0; j < s; ++j)
            amax = std::max(amax, scalar_abs(rec.A[i][j] - m.base.A[i][j]));
    }
    out.push_back(detail::make_report("gbar.A", amax, T(0), tol));
    out.push_back(detail::make_report("gbar.b", bmax, T(0), tol));
    out.push_back(detail::make_report("gbar.c", cmax, T(0), tol));
    if (m.base.b_hat && rec.b_hat) {
        T hmax(0);
        for (std::size_t j = 0; j < s; ++j)
            hmax = std::max(hmax, scalar_abs((*rec.b_hat)[j] - (*m.base.b_hat)[j]));
        out.push_back(detail::make_report("gbar.bhat", hmax, T(0), tol));
    }
    return out;
}

} // namespace mrigark
