#pragma once

#include "mrigark/phi.hpp"
#include "mrigark/tableau.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace mrigark {

struct StabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Mat2c = std::array<std::array<Complex, 2>, 2>;

/// Two-dimensional coupled linear test problem
///   [y_f; y_s]' = Omega [y_f; y_s],
/// Omega = [[lf, (1-xi)(lf-ls)/alpha], [-alpha xi (lf-ls), ls]].
/// Its eigenvalues are xi*lf+(1-xi)*ls and (1-xi)*lf+xi*ls; alpha only
/// rescales the fast variable.
struct CoupledTestProblem {
    Complex lambda_f{-10.0, 0.0};
    Complex lambda_s{-1.0, 0.0};
    double xi = 0.5;
    Complex alpha_scale{1.0, 0.0};

    Complex eta_f() const { return -alpha_scale * xi * (lambda_f - lambda_s); }
    Complex eta_s() const { return (1.0 - xi) * (lambda_f - lambda_s) / alpha_scale; }
    /// Discriminant sqrt(4 eta_f eta_s + (lf-ls)^2) = (1-2xi)(lf-ls).
    Complex delta() const
    {
        Complex d = lambda_f - lambda_s;
        return std::sqrt(4.0 * eta_f() * eta_s() + d * d);
    }
    Mat2c omega() const
    {
        return {{{lambda_f, eta_s()}, {eta_f(), lambda_s}}};
    }
    std::array<Complex, 2> eigenvalues() const
    {
        return {xi * lambda_f + (1.0 - xi) * lambda_s, (1.0 - xi) * lambda_f + xi * lambda_s};
    }
};

/// One-step amplification factor R with y_{n+1} = R(z_f, z_s) y_n on
/// y' = lambda_f y + lambda_s y, from the stage recurrence with exact fast
/// solves. Throws StabilityError when an implicit factor is singular.
Complex scalar_stability(const MriGarkMethod<double>& m, Complex z_f, Complex z_s);

/// Limit of R as Re z_f -> -infinity inside a wedge of half-angle < 90 deg
/// (all phi factors on stages with dc > 0 vanish).
Complex scalar_stability_fast_limit(const MriGarkMethod<double>& m, Complex z_s);

/// One-step 2x2 propagator M on the coupled test problem over step H.
Mat2c matrix_stability(const MriGarkMethod<double>& m, const CoupledTestProblem& p, double H);

/// Propagator in nondimensional variables z_f = H lf, z_s = H ls,
/// w_s = H eta_s, w_f = H eta_f.
Mat2c matrix_stability_z(const MriGarkMethod<double>& m, Complex z_f, Complex z_s, Complex w_s,
                         Complex w_f);

/// Classical stability function of the slow base tableau,
/// R(z) = 1 + z b^T (I - z A)^{-1} 1.
Complex base_stability(const MriGarkMethod<double>& m, Complex z);

double spectral_radius(const Mat2c& m);

// ---------------------------------------------------------------------------
// Region scans
// ---------------------------------------------------------------------------

enum class ScanMode { scalar, matrix };

struct GridSpec {
    double re_min = -6.0, re_max = 1.0;
    double im_min = -4.0, im_max = 4.0;
    int nre = 81, nim = 81;
};

/// Deterministic samples of the fast wedge {|z| <= rho, |arg z - pi| <= alpha}:
/// tensor grid of log-spaced radii (plus z=0 and, for scalar scans with
/// rho = inf, the analytic Re z -> -inf limit) against a master angle ladder
/// that nests across the tested alpha values.
struct WedgeSamples {
    std::vector<Complex> points;
    bool include_fast_limit = false;
};

WedgeSamples wedge_samples(double rho, double alpha_deg, ScanMode mode);

struct RegionScan {
    ScanMode mode = ScanMode::scalar;
    double rho = std::numeric_limits<double>::infinity();
    double alpha_deg = 45.0;
    double xi = 0.5; // matrix mode only
    GridSpec grid;
    // outputs, row-major with the imaginary axis as the outer loop
    std::vector<double> values;
    std::vector<std::uint8_t> member;
};

/// Membership tolerance: grid points on the boundary count as stable.
inline constexpr double region_membership_tol = 1e-10;

/// Fills values (max over wedge samples of |R| or the spectral radius of M)
/// and membership for every z_s grid point.
RegionScan scan_region(const MriGarkMethod<double>& m, RegionScan scan);

} // namespace mrigark
