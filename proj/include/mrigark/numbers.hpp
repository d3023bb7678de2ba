#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace mrigark {

/// Exact rational scalar for tableau coefficients and order-condition
/// algebra. Expression templates are disabled so the type behaves like a
/// plain scalar in generic code.
using Rational = boost::multiprecision::number<
    boost::multiprecision::backends::rational_adaptor<boost::multiprecision::cpp_int_backend<>>,
    boost::multiprecision::et_off>;

/// 50-digit float for methods whose coefficients depend on an algebraic number.
using Real50 = boost::multiprecision::number<boost::multiprecision::backends::cpp_bin_float<50>,
                                             boost::multiprecision::et_off>;

inline Rational frac(long long num, long long den) { return Rational(num, den); }

inline double to_double(const Rational& x) { return x.convert_to<double>(); }
inline double to_double(const Real50& x) { return x.convert_to<double>(); }
inline double to_double(double x) { return x; }

template <class To>
To scalar_cast(const Rational& x)
{
    if constexpr (std::is_same_v<To, Rational>)
        return x;
    else
        return x.template convert_to<To>();
}

template <class To>
To scalar_cast(const Real50& x)
{
    static_assert(!std::is_same_v<To, Rational>, "lossy conversion to rational");
    if constexpr (std::is_same_v<To, Real50>)
        return x;
    else
        return x.template convert_to<To>();
}

template <class To>
To scalar_cast(double x)
{
    return To(x);
}

template <class T>
T scalar_abs(const T& x)
{
    return x < T(0) ? T(-x) : x;
}

/// Renders a rational as "p" or "p/q"; used by the JSON method schema.
inline std::string to_fraction_string(const Rational& x)
{
    std::ostringstream os;
    os << numerator(x);
    if (denominator(x) != 1)
        os << "/" << denominator(x);
    return os.str();
}

inline std::string to_decimal_string(const Real50& x, int digits = 40)
{
    std::ostringstream os;
    os.precision(digits);
    os << x;
    return os.str();
}

/// Parses "p/q", "p", or a decimal literal that happens to be integral.
inline Rational parse_fraction(const std::string& text)
{
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos)
            return Rational(boost::multiprecision::cpp_int(text));
        boost::multiprecision::cpp_int num(text.substr(0, slash));
        boost::multiprecision::cpp_int den(text.substr(slash + 1));
        if (den == 0)
            throw std::invalid_argument("zero denominator");
        return Rational(num, den);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a rational literal: '" + text + "'");
    }
}

} // namespace mrigark
