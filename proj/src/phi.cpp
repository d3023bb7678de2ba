#include "mrigark/phi.hpp"

#include <cmath>
#include <stdexcept>

namespace mrigark {

namespace phi_detail {

/// Taylor sum phi_k(z) = sum_j z^j (k-1)!/(j+k)!; stable while |z| <~ k since
/// the terms then decay from the first one on.
Complex phi_series(int k, Complex z)
{
    Complex term(1.0 / k, 0.0);
    Complex sum = term;
    for (int j = 0; j < 400; ++j) {
        term *= z / double(j + k + 1);
        sum += term;
        if (std::abs(term) < 1e-20 * std::abs(sum) && j > 2)
            break;
    }
    return sum;
}

/// Upward chain phi_1 = (e^z - 1)/z, phi_{k+1} = (k phi_k - 1)/z; each step
/// damps errors by k/|z|, so it is used only when |z| >= max(1, k).
Complex phi_recurrence(int k, Complex z)
{
    Complex p = std::exp(z);
    if (k == 0)
        return p;
    p = (p - 1.0) / z;
    for (int m = 1; m < k; ++m)
        p = (double(m) * p - 1.0) / z;
    return p;
}

} // namespace phi_detail

bool phi_uses_series(int k, Complex z)
{
    return std::abs(z) < std::max(1.0, double(k));
}

Complex phi(int k, Complex z)
{
    if (k < 0 || k > phi_max_index)
        throw std::invalid_argument("phi: index outside 0..12");
    // evaluate in the closed upper half-plane; conjugate symmetry is exact
    bool flip = z.imag() < 0.0;
    if (flip)
        z = std::conj(z);
    Complex v;
    if (k == 0)
        v = std::exp(z);
    else
        v = phi_uses_series(k, z) ? phi_detail::phi_series(k, z)
                                  : phi_detail::phi_recurrence(k, z);
    return flip ? std::conj(v) : v;
}

std::vector<Complex> phi_row(int kmax, Complex z)
{
    if (kmax < 0 || kmax > phi_max_index)
        throw std::invalid_argument("phi_row: index outside 0..12");
    std::vector<Complex> row(kmax + 1);
    for (int k = 0; k <= kmax; ++k)
        row[k] = phi(k, z);
    return row;
}

} // namespace mrigark
