#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mrigark {

using Vec = std::vector<double>;

struct IntegratorError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NewtonError : IntegratorError {
    double last_residual;
    NewtonError(const std::string& what, double res) : IntegratorError(what), last_residual(res) {}
};

struct InnerSolverError : IntegratorError {
    using IntegratorError::IntegratorError;
};

/// Dense row-major matrix, used for Jacobians and small linear algebra.
struct DMat {
    std::size_t rows = 0, cols = 0;
    Vec a;

    DMat() = default;
    DMat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}
    double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

/// y' = f_slow(t,y) + f_fast(t,y). jac_slow is optional (empty function);
/// rate callbacks must be pure in (t, y).
struct AdditiveSystem {
    std::size_t dimension = 0;
    std::function<void(double, const Vec&, Vec&)> f_slow;
    std::function<void(double, const Vec&, Vec&)> f_fast;
    std::function<void(double, const Vec&, DMat&)> jac_slow; // optional
};

/// [y_f; y_s]' = [f_fast(t,y_f,y_s); f_slow(t,y_f,y_s)].
struct ComponentSystem {
    std::size_t dim_fast = 0, dim_slow = 0;
    std::function<void(double, const Vec&, const Vec&, Vec&)> f_fast;
    std::function<void(double, const Vec&, const Vec&, Vec&)> f_slow;
    std::function<void(double, const Vec&, const Vec&, DMat&)> jac_slow_ys; // optional
};

enum class InnerMode { adaptive, fixed };

/// Fast-stage solver configuration. Adaptive mode is an embedded explicit
/// 5(4) pair; fixed mode takes substeps equal steps of an explicit method of
/// the given order. An inner order of p-1 suffices for an order-p scheme
/// with moderate substep counts; the defaults exceed that.
struct InnerSolveConfig {
    InnerMode mode = InnerMode::adaptive;
    double rel_tol = 1e-10;
    double abs_tol = 1e-10;
    int substeps = 10;  // fixed mode
    int order = 4;      // fixed mode, 1..4
};

struct StepStats {
    long slow_rhs = 0;
    long fast_rhs = 0;
    long newton_iters = 0;
    long rejected_inner_steps = 0;

    StepStats& operator+=(const StepStats& o)
    {
        slow_rhs += o.slow_rhs;
        fast_rhs += o.fast_rhs;
        newton_iters += o.newton_iters;
        rejected_inner_steps += o.rejected_inner_steps;
        return *this;
    }
};

struct StepResult {
    Vec y_next;
    Vec y_embedded;
    double error_estimate = 0.0;
    StepStats stats;
};

/// Absolute 2-norm over sqrt(n).
inline double rms_norm(const Vec& v)
{
    double s = 0.0;
    for (double x : v)
        s += x * x;
    return v.empty() ? 0.0 : std::sqrt(s / static_cast<double>(v.size()));
}

} // namespace mrigark
