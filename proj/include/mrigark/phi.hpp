#pragma once

#include <complex>
#include <vector>

namespace mrigark {

using Complex = std::complex<double>;

/// Highest supported phi index; built-in methods use polynomial degree <= 2
/// and stability needs at most degree+2.
inline constexpr int phi_max_index = 12;

/// phi_0(z) = e^z, phi_k(z) = int_0^1 e^{z(1-t)} t^{k-1} dt for k >= 1.
/// Entire functions; phi_k(0) = 1/k for k >= 1.
Complex phi(int k, Complex z);

/// [phi_0(z), ..., phi_kmax(z)].
std::vector<Complex> phi_row(int kmax, Complex z);

/// True when (k, z) is evaluated by the Taylor series rather than the upward
/// recurrence; exposed so the crossover agreement test can probe both paths.
bool phi_uses_series(int k, Complex z);

namespace phi_detail {
Complex phi_series(int k, Complex z);
Complex phi_recurrence(int k, Complex z);
} // namespace phi_detail

} // namespace mrigark
