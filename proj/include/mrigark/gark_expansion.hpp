#pragma once

#include "mrigark/order_conditions.hpp"
#include "mrigark/tableau.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

namespace mrigark {

/// Discrete fast Runge-Kutta method substituted for the exact fast flow.
template <class T>
struct FastRK {
    std::string name;
    Matrix<T> A;
    Vector<T> b;
    Vector<T> c;
    int order = 0;

    std::size_t stages() const { return b.size(); }
};

template <class T>
void validate_fast(const FastRK<T>& f, const T& tol)
{
    const std::size_t s = f.stages();
    detail::require<T>(f.A.size() == s && f.c.size() == s, "fast tableau dimensions");
    T bs(0);
    for (const T& x : f.b)
        bs += x;
    detail::require<T>(scalar_abs(bs - T(1)) <= tol, "fast weights do not sum to 1");
    for (std::size_t i = 0; i < s; ++i) {
        T rs(0);
        for (std::size_t j = 0; j < s; ++j)
            rs += f.A[i][j];
        detail::require<T>(scalar_abs(rs - f.c[i]) <= tol, "fast row sums differ from c");
    }
}

template <class T>
FastRK<T> fast_rk4_classic()
{
    FastRK<T> f;
    f.name = "rk4";
    f.order = 4;
    T h = T(1) / 2;
    f.c = {T(0), h, h, T(1)};
    f.A = zero_matrix<T>(4, 4);
    f.A[1][0] = h;
    f.A[2][1] = h;
    f.A[3][2] = T(1);
    f.b = {T(1) / 6, T(1) / 3, T(1) / 3, T(1) / 6};
    return f;
}

template <class T>
FastRK<T> fast_rk4_three_eighths()
{
    FastRK<T> f;
    f.name = "rk4-3/8";
    f.order = 4;
    f.c = {T(0), T(1) / 3, T(2) / 3, T(1)};
    f.A = zero_matrix<T>(4, 4);
    f.A[1][0] = T(1) / 3;
    f.A[2][0] = T(-1) / 3;
    f.A[2][1] = T(1);
    f.A[3][0] = T(1);
    f.A[3][1] = T(-1);
    f.A[3][2] = T(1);
    f.b = {T(1) / 8, T(3) / 8, T(3) / 8, T(1) / 8};
    return f;
}

template <class T>
FastRK<T> fast_midpoint()
{
    FastRK<T> f;
    f.name = "midpoint";
    f.order = 2;
    f.c = {T(0), T(1) / 2};
    f.A = {{T(0), T(0)}, {T(1) / 2, T(0)}};
    f.b = {T(0), T(1)};
    return f;
}

template <class T>
FastRK<T> fast_heun()
{
    FastRK<T> f;
    f.name = "heun";
    f.order = 2;
    f.c = {T(0), T(1)};
    f.A = {{T(0), T(0)}, {T(1), T(0)}};
    f.b = {T(1) / 2, T(1) / 2};
    return f;
}

/// The expanded two-partition Butcher blocks: fast stage space of size
/// ss*sf (one fast sub-step per slow stage), slow stage space of size ss.
template <class T>
struct GarkTableau {
    Matrix<T> Aff, Afs, Asf, Ass;
    Vector<T> bf, bs;
    std::size_t sf = 0, ss = 0;

    std::size_t fast_stages() const { return ss * sf; }
};

/// Assembles the GARK Butcher blocks of the expansion lemma.
template <class T>
GarkTableau<T> expand(const MriGarkMethod<T>& method, const FastRK<T>& fast)
{
    const std::size_t ss = method.stages();
    const std::size_t sf = fast.stages();
    const std::size_t n = ss * sf;
    const Vector<T>& dc = method.base.dc;

    GarkTableau<T> g;
    g.sf = sf;
    g.ss = ss;

    g.Aff = zero_matrix<T>(n, n);
    for (std::size_t blk = 0; blk < ss; ++blk)
        for (std::size_t lam = 0; lam <= blk; ++lam)
            for (std::size_t r = 0; r < sf; ++r)
                for (std::size_t q = 0; q < sf; ++q)
                    g.Aff[blk * sf + r][lam * sf + q] =
                        (lam == blk) ? dc[blk] * fast.A[r][q] : dc[lam] * fast.b[q];

    g.bf.assign(n, T(0));
    for (std::size_t blk = 0; blk < ss; ++blk)
        for (std::size_t q = 0; q < sf; ++q)
            g.bf[blk * sf + q] = dc[blk] * fast.b[q];

    // A^{fs} block row i: ones * A[i,:] + sum_k (A^{ff} c^{x k}) Gamma^k[i,:]
    std::vector<Vector<T>> acks; // A^{ff} c^{x k} for each stored power k
    Vector<T> cpow(sf, T(1));
    for (std::size_t k = 0; k < method.gammas.gamma.size(); ++k) {
        if (k > 0)
            for (std::size_t q = 0; q < sf; ++q)
                cpow[q] *= fast.c[q];
        acks.push_back(detail::matvec(fast.A, cpow));
    }
    g.Afs = zero_matrix<T>(n, ss);
    for (std::size_t i = 0; i < ss; ++i)
        for (std::size_t r = 0; r < sf; ++r)
            for (std::size_t j = 0; j < ss; ++j) {
                T v = method.base.A[i][j];
                for (std::size_t k = 0; k < acks.size(); ++k)
                    v += acks[k][r] * method.gammas.gamma[k][i][j];
                g.Afs[i * sf + r][j] = v;
            }

    // A^{sf} block column lam: dc_lam g_{lam+1} b^T (zero for the last block)
    g.Asf = zero_matrix<T>(ss, n);
    for (std::size_t lam = 0; lam + 1 < ss; ++lam)
        for (std::size_t i = lam + 1; i < ss; ++i)
            for (std::size_t q = 0; q < sf; ++q)
                g.Asf[i][lam * sf + q] = dc[lam] * fast.b[q];

    Matrix<T> gbar = gamma_bar(method.gammas);
    g.Ass = zero_matrix<T>(ss, ss);
    for (std::size_t i = 1; i < ss; ++i)
        for (std::size_t j = 0; j < ss; ++j)
            g.Ass[i][j] = g.Ass[i - 1][j] + gbar[i - 1][j];
    g.bs.assign(ss, T(0));
    for (std::size_t j = 0; j < ss; ++j)
        for (std::size_t p = 0; p < ss; ++p)
            g.bs[j] += gbar[p][j];
    return g;
}

// ---------------------------------------------------------------------------
// Bi-colored rooted trees
// ---------------------------------------------------------------------------

enum class Color : char { fast = 'f', slow = 's' };

struct ColoredTree {
    Color color = Color::fast;
    std::vector<ColoredTree> children;

    int order() const
    {
        int n = 1;
        for (const auto& c : children)
            n += c.order();
        return n;
    }

    long density() const
    {
        long d = order();
        for (const auto& c : children)
            d *= c.density();
        return d;
    }

    /// Canonical signature: color, then sorted child signatures in brackets.
    std::string signature() const
    {
        std::string s(1, static_cast<char>(color));
        if (children.empty())
            return s;
        std::vector<std::string> sub;
        for (const auto& c : children)
            sub.push_back(c.signature());
        std::sort(sub.begin(), sub.end());
        s += '[';
        for (std::size_t i = 0; i < sub.size(); ++i) {
            if (i)
                s += ',';
            s += sub[i];
        }
        s += ']';
        return s;
    }
};

/// All bi-colored rooted trees with at most p vertices (p <= 4), duplicate
/// free in canonical form, sorted by (order, signature). Exactly-order
/// tallies are 2, 4, 14, 52 for p = 1..4.
std::vector<ColoredTree> colored_trees(int p);

/// Elementary weight of a colored tree over the expanded two-part tableau.
template <class T>
T elementary_weight(const GarkTableau<T>& g, const ColoredTree& tree)
{
    auto block = [&](Color row, Color col) -> const Matrix<T>& {
        if (row == Color::fast)
            return col == Color::fast ? g.Aff : g.Afs;
        return col == Color::fast ? g.Asf : g.Ass;
    };
    auto stage_count = [&](Color c) { return c == Color::fast ? g.fast_stages() : g.ss; };

    // stage vector of a subtree rooted at color m
    auto psi = [&](auto&& self, const ColoredTree& t) -> Vector<T> {
        Vector<T> v(stage_count(t.color), T(1));
        for (const auto& child : t.children) {
            Vector<T> w = detail::matvec(block(t.color, child.color), self(self, child));
            for (std::size_t i = 0; i < v.size(); ++i)
                v[i] *= w[i];
        }
        return v;
    };

    const Vector<T>& b = tree.color == Color::fast ? g.bf : g.bs;
    return detail::dot(b, psi(psi, tree));
}

/// One report per tree of order <= p: Phi(tau) = 1/gamma(tau).
template <class T>
std::vector<ConditionReport> check_gark_order(const GarkTableau<T>& g, int p, double tol)
{
    std::vector<ConditionReport> out;
    for (const ColoredTree& t : colored_trees(p)) {
        T phi = elementary_weight(g, t);
        T rhs = T(1) / T(static_cast<int>(t.density()));
        out.push_back(detail::make_report("tree." + t.signature(), phi, rhs, tol));
    }
    return out;
}

} // namespace mrigark
