#pragma once

#include "mrigark/ode.hpp"

namespace mrigark {

using InnerRhs = std::function<void(double, const Vec&, Vec&)>;

struct InnerRunStats {
    long rhs_calls = 0;
    long steps = 0;
    long rejected = 0;
};

/// Integrates v' = rhs(theta, v) over theta in [0, length]. Adaptive mode is
/// a Dormand-Prince 5(4) pair with a standard controller; fixed mode takes
/// cfg.substeps equal steps of an explicit method of order cfg.order.
Vec solve_inner_ode(const InnerRhs& rhs, Vec v0, double length, const InnerSolveConfig& cfg,
                    InnerRunStats& stats);

} // namespace mrigark
