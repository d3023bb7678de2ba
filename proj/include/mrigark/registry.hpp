#pragma once

#include "mrigark/tableau.hpp"

#include <string>
#include <variant>
#include <vector>

namespace mrigark {

struct RegistryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Built-in methods are stored exactly: rational methods as integer fractions,
/// the two lambda-dependent (E)SDIRK methods at 50-digit precision.
using ExactMethod = std::variant<MriGarkMethod<Rational>, MriGarkMethod<Real50>>;

struct MethodInfo {
    std::string name;
    int order = 0;
    int embedded_order = 0;
    std::size_t stages = 0;
    MethodKind kind = MethodKind::explicit_method;
};

/// Names accepted by builtin()/builtin_exact(), sorted.
std::vector<std::string> builtin_names();
std::vector<MethodInfo> builtin_infos();

ExactMethod builtin_exact(const std::string& name);
MriGarkMethod<double> builtin(const std::string& name);

MriGarkMethod<double> to_double_method(const ExactMethod& m);

/// Two-stage second order explicit family; c2 in (0,1]. c2=1/2 is the named
/// midpoint method, c2=1 the trapezoidal one.
MriGarkMethod<Rational> make_erk22(const Rational& c2);

/// Three-stage third order explicit family with free parameter delta; the
/// named member pins delta=-1/2.
MriGarkMethod<Rational> make_erk33(const Rational& delta);

/// Real root of 6*l^3 - 18*l^2 + 9*l - 1 near 0.4358665, to 50 digits.
const Real50& esdirk_lambda();

} // namespace mrigark
