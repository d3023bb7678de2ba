#pragma once

#include "mrigark/numbers.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mrigark {

template <class T>
using Vector = std::vector<T>;
template <class T>
using Matrix = std::vector<std::vector<T>>;

template <class T>
Matrix<T> zero_matrix(std::size_t rows, std::size_t cols)
{
    return Matrix<T>(rows, Vector<T>(cols, T(0)));
}

struct TableauError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Slow base Runge-Kutta tableau with the stage increments dc that drive the
/// modified fast solves: dc[i] = c[i+1]-c[i] for interior stages and 1-c[s-1]
/// for the last one.
template <class T>
struct BaseTableau {
    Vector<T> c;
    Matrix<T> A;
    Vector<T> b;
    std::optional<Vector<T>> b_hat;
    Vector<T> dc;

    std::size_t stages() const { return c.size(); }
};

template <class T>
Vector<T> stage_increments(const Vector<T>& c)
{
    Vector<T> dc(c.size());
    for (std::size_t i = 0; i + 1 < c.size(); ++i)
        dc[i] = c[i + 1] - c[i];
    if (!c.empty())
        dc[c.size() - 1] = T(1) - c.back();
    return dc;
}

/// Polynomial coupling coefficients: gamma[k] is the s x s matrix of the
/// tau^k coefficients, gamma_hat[k] the replacement last row used by the
/// embedded solution.
template <class T>
struct GammaStack {
    std::vector<Matrix<T>> gamma;
    std::vector<Vector<T>> gamma_hat;

    int degree() const { return static_cast<int>(gamma.size()) - 1; }
    std::size_t stages() const { return gamma.empty() ? 0 : gamma.front().size(); }
    bool has_embedded() const { return !gamma_hat.empty(); }
};

enum class MethodKind { explicit_method, decoupled_implicit };

inline std::string kind_name(MethodKind k)
{
    return k == MethodKind::explicit_method ? "explicit" : "decoupled_implicit";
}

template <class T>
struct MriGarkMethod {
    std::string name;
    int order = 0;
    int embedded_order = 0;
    MethodKind kind = MethodKind::explicit_method;
    BaseTableau<T> base;
    GammaStack<T> gammas;

    std::size_t stages() const { return base.stages(); }
};

/// Time-integrated coupling weights: gamma_bar = sum_k Gamma^k / (k+1).
template <class T>
Matrix<T> gamma_bar(const GammaStack<T>& stack)
{
    const std::size_t s = stack.stages();
    Matrix<T> out = zero_matrix<T>(s, s);
    for (std::size_t k = 0; k < stack.gamma.size(); ++k)
        for (std::size_t i = 0; i < s; ++i)
            for (std::size_t j = 0; j < s; ++j)
                out[i][j] += stack.gamma[k][i][j] / T(static_cast<int>(k) + 1);
    return out;
}

template <class T>
Vector<T> gamma_hat_bar(const GammaStack<T>& stack)
{
    const std::size_t s = stack.stages();
    Vector<T> out(s, T(0));
    for (std::size_t k = 0; k < stack.gamma_hat.size(); ++k)
        for (std::size_t j = 0; j < s; ++j)
            out[j] += stack.gamma_hat[k][j] / T(static_cast<int>(k) + 1);
    return out;
}

/// Pointwise evaluation Gamma(tau) = sum_k Gamma^k tau^k for tau in [0,1].
template <class T>
Matrix<T> gamma_at(const GammaStack<T>& stack, const T& tau)
{
    if (tau < T(0) || tau > T(1))
        throw TableauError("gamma_at: tau outside [0,1]");
    const std::size_t s = stack.stages();
    Matrix<T> out = zero_matrix<T>(s, s);
    T power(1);
    for (std::size_t k = 0; k < stack.gamma.size(); ++k) {
        for (std::size_t i = 0; i < s; ++i)
            for (std::size_t j = 0; j < s; ++j)
                out[i][j] += stack.gamma[k][i][j] * power;
        power *= tau;
    }
    return out;
}

/// Integrated coupling polynomial gamma_tilde(x) = sum_k Gamma^k x^{k+1}/(k+1).
template <class T>
Matrix<T> gamma_tilde(const GammaStack<T>& stack, const T& x)
{
    const std::size_t s = stack.stages();
    Matrix<T> out = zero_matrix<T>(s, s);
    T power = x;
    for (std::size_t k = 0; k < stack.gamma.size(); ++k) {
        for (std::size_t i = 0; i < s; ++i)
            for (std::size_t j = 0; j < s; ++j)
                out[i][j] += stack.gamma[k][i][j] * power / T(static_cast<int>(k) + 1);
        power *= x;
    }
    return out;
}

/// Inverts the gamma_bar difference relations by cumulative summation:
/// A[i] = sum_{p<i} gamma_bar[p], b = sum over all rows, c = row sums of A.
/// When the stack carries embedded rows, b_hat = gamma_hat_bar + A[s-1].
template <class T>
BaseTableau<T> reconstruct_base(const GammaStack<T>& stack, std::size_t s)
{
    Matrix<T> gbar = gamma_bar(stack);
    BaseTableau<T> out;
    out.A = zero_matrix<T>(s, s);
    out.b.assign(s, T(0));
    out.c.assign(s, T(0));
    for (std::size_t i = 1; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j)
            out.A[i][j] = out.A[i - 1][j] + gbar[i - 1][j];
    for (std::size_t j = 0; j < s; ++j)
        out.b[j] = out.A[s - 1][j] + gbar[s - 1][j];
    for (std::size_t i = 0; i < s; ++i) {
        T sum(0);
        for (std::size_t j = 0; j < s; ++j)
            sum += out.A[i][j];
        out.c[i] = sum;
    }
    out.dc = stage_increments(out.c);
    if (stack.has_embedded()) {
        Vector<T> bh = gamma_hat_bar(stack);
        for (std::size_t j = 0; j < s; ++j)
            bh[j] += out.A[s - 1][j];
        out.b_hat = bh;
    }
    return out;
}

namespace detail {

template <class T>
void require(bool ok, const std::string& what)
{
    if (!ok)
        throw TableauError(what);
}

} // namespace detail

/// Structural validation; tol = 0 requests exact checks (rational storage).
template <class T>
void validate_base(const BaseTableau<T>& t, const T& tol)
{
    const std::size_t s = t.stages();
    detail::require<T>(s > 0, "empty tableau");
    detail::require<T>(t.A.size() == s && t.b.size() == s && t.dc.size() == s,
                       "inconsistent tableau dimensions");
    for (std::size_t i = 0; i < s; ++i) {
        detail::require<T>(t.A[i].size() == s, "A is not square");
        detail::require<T>(t.c[i] >= T(0) && t.c[i] <= T(1), "abscissa outside [0,1]");
        if (i + 1 < s)
            detail::require<T>(t.c[i] <= t.c[i + 1], "abscissae not non-decreasing");
        detail::require<T>(t.dc[i] >= T(0), "negative stage increment");
        T expected = (i + 1 < s) ? t.c[i + 1] - t.c[i] : T(1) - t.c[i];
        detail::require<T>(scalar_abs(t.dc[i] - expected) <= tol, "dc inconsistent with c");
        T row_sum(0);
        for (std::size_t j = 0; j < s; ++j)
            row_sum += t.A[i][j];
        detail::require<T>(scalar_abs(row_sum - t.c[i]) <= tol, "row sum of A differs from c");
    }
    T bsum(0);
    for (const T& x : t.b)
        bsum += x;
    detail::require<T>(scalar_abs(bsum - T(1)) <= tol, "weights do not sum to 1");
    if (t.b_hat) {
        detail::require<T>(t.b_hat->size() == s, "embedded weight length mismatch");
        T bhsum(0);
        for (const T& x : *t.b_hat)
            bhsum += x;
        detail::require<T>(scalar_abs(bhsum - T(1)) <= tol, "embedded weights do not sum to 1");
    }
}

template <class T>
void validate_method(const MriGarkMethod<T>& m, const T& tol)
{
    validate_base(m.base, tol);
    const std::size_t s = m.stages();
    detail::require<T>(m.gammas.stages() == s, "gamma stack stage count mismatch");
    for (const auto& g : m.gammas.gamma) {
        detail::require<T>(g.size() == s, "gamma matrix size mismatch");
        for (std::size_t i = 0; i < s; ++i) {
            detail::require<T>(g[i].size() == s, "gamma matrix not square");
            for (std::size_t j = i + 2; j < s; ++j)
                detail::require<T>(g[i][j] == T(0), "gamma nonzero above the first superdiagonal");
            if (i + 1 < s && g[i][i + 1] != T(0)) {
                detail::require<T>(scalar_abs(m.base.dc[i]) <= tol,
                                   "superdiagonal gamma on a stage with dc != 0");
                detail::require<T>(m.kind == MethodKind::decoupled_implicit,
                                   "explicit method with implicit coupling entry");
            }
        }
    }
    for (const auto& gh : m.gammas.gamma_hat)
        detail::require<T>(gh.size() == s, "gamma_hat length mismatch");
    if (m.kind == MethodKind::explicit_method) {
        for (const auto& g : m.gammas.gamma)
            for (std::size_t i = 0; i < s; ++i)
                for (std::size_t j = i + 1; j < s; ++j)
                    detail::require<T>(g[i][j] == T(0), "explicit method gamma not strictly lower");
    }
}

template <class To, class From>
MriGarkMethod<To> convert_method(const MriGarkMethod<From>& m)
{
    MriGarkMethod<To> out;
    out.name = m.name;
    out.order = m.order;
    out.embedded_order = m.embedded_order;
    out.kind = m.kind;
    auto conv_vec = [](const Vector<From>& v) {
        Vector<To> r(v.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            r[i] = scalar_cast<To>(v[i]);
        return r;
    };
    auto conv_mat = [&](const Matrix<From>& a) {
        Matrix<To> r(a.size());
        for (std::size_t i = 0; i < a.size(); ++i)
            r[i] = conv_vec(a[i]);
        return r;
    };
    out.base.c = conv_vec(m.base.c);
    out.base.A = conv_mat(m.base.A);
    out.base.b = conv_vec(m.base.b);
    if (m.base.b_hat)
        out.base.b_hat = conv_vec(*m.base.b_hat);
    out.base.dc = conv_vec(m.base.dc);
    for (const auto& g : m.gammas.gamma)
        out.gammas.gamma.push_back(conv_mat(g));
    for (const auto& gh : m.gammas.gamma_hat)
        out.gammas.gamma_hat.push_back(conv_vec(gh));
    return out;
}

} // namespace mrigark
