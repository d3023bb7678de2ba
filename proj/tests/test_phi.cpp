#include "mrigark/phi.hpp"
#include "phi_oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

using namespace mrigark;
using mrigark::testing::phi_quadrature;

TEST_CASE("phi_0 is the exponential; values at zero are 1/k")
{
    CHECK(phi(0, Complex(0, 0)) == Complex(1, 0));
    Complex z(0.3, -0.7);
    CHECK(std::abs(phi(0, z) - std::exp(z)) <= 1e-15 * std::abs(std::exp(z)));
    // exact in the series branch: the Taylor sum terminates at the constant
    for (int k = 1; k <= phi_max_index; ++k) {
        Complex v = phi(k, Complex(0, 0));
        CHECK(v.real() == 1.0 / k);
        CHECK(v.imag() == 0.0);
        CHECK(phi_uses_series(k, Complex(0, 0)));
    }
}

TEST_CASE("closed forms: phi_1(-1) = 1 - e^{-1}")
{
    Complex v = phi(1, Complex(-1, 0));
    CHECK(v.real() == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));
    CHECK(v.imag() == 0.0);
    Complex q = phi_quadrature(1, Complex(-1, 0));
    CHECK(std::abs(v - q) < 1e-13);
}

TEST_CASE("phi_row at 0 and deep in the left half-plane")
{
    auto row = phi_row(3, Complex(0, 0));
    CHECK(row[0] == Complex(1, 0));
    CHECK(row[1] == Complex(1, 0));
    CHECK(row[2].real() == doctest::Approx(0.5));
    CHECK(row[3].real() == doctest::Approx(1.0 / 3.0));

    Complex z(-10, 0);
    auto deep = phi_row(2, z);
    for (int k = 1; k <= 2; ++k) {
        Complex q = phi_quadrature(k, z);
        CHECK(std::abs(deep[k] - q) <= 1e-12 * std::abs(q));
    }
}

TEST_CASE("quadrature oracle agreement across the sampled disk |z| <= 50")
{
    std::mt19937 rng(20240817);
    std::uniform_real_distribution<double> radius(0.0, 50.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * 3.14159265358979323846);
    for (int trial = 0; trial < 50; ++trial) {
        double r = radius(rng), a = angle(rng);
        Complex z = r * Complex(std::cos(a), std::sin(a));
        for (int k = 1; k <= 6; ++k) {
            Complex mine = phi(k, z);
            Complex q = phi_quadrature(k, z);
            double scale = std::max(std::abs(q), 1e-300);
            CAPTURE(k);
            CAPTURE(z.real());
            CAPTURE(z.imag());
            CHECK(std::abs(mine - q) / scale < 1e-12);
        }
    }
}

TEST_CASE("series/recurrence crossover agreement at the switch radius")
{
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * 3.14159265358979323846);
    for (int k = 1; k <= 8; ++k) {
        double r = std::max(1.0, double(k)); // switch radius for this index
        for (int trial = 0; trial < 16; ++trial) {
            double a = angle(rng);
            Complex z = r * Complex(std::cos(a), std::sin(a));
            Complex series = phi_detail::phi_series(k, z);
            Complex recur = phi_detail::phi_recurrence(k, z);
            CAPTURE(k);
            CAPTURE(a);
            CHECK(std::abs(series - recur) <= 1e-12 * std::max(1.0, std::abs(series)));
        }
    }
}

TEST_CASE("recurrence residual |z phi_{k+1} - k phi_k + 1| stays small")
{
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> radius(1.0, 40.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * 3.14159265358979323846);
    for (int trial = 0; trial < 40; ++trial) {
        double r = radius(rng), a = angle(rng);
        Complex z = r * Complex(std::cos(a), std::sin(a));
        auto row = phi_row(6, z);
        for (int k = 1; k <= 5; ++k) {
            Complex residual = z * row[k + 1] - double(k) * row[k] + 1.0;
            CHECK(std::abs(residual) <= 1e-12 * std::max(1.0, std::abs(row[k])));
        }
    }
}

TEST_CASE("positivity on the negative real axis")
{
    for (double x : {0.0, -0.5, -1.0, -3.0, -10.0, -45.0})
        for (int k = 0; k <= phi_max_index; ++k) {
            Complex v = phi(k, Complex(x, 0.0));
            CAPTURE(x);
            CAPTURE(k);
            CHECK(v.real() > 0.0);
            CHECK(v.imag() == 0.0);
        }
}

TEST_CASE("conjugate symmetry is exact by construction")
{
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> coord(-30.0, 30.0);
    for (int trial = 0; trial < 30; ++trial) {
        Complex z(coord(rng), coord(rng));
        for (int k = 0; k <= 6; ++k)
            CHECK(phi(k, std::conj(z)) == std::conj(phi(k, z)));
    }
}

TEST_CASE("index cap")
{
    CHECK_THROWS_AS(phi(13, Complex(0, 0)), std::invalid_argument);
    CHECK_THROWS_AS(phi(-1, Complex(0, 0)), std::invalid_argument);
}
