#pragma once

#include "mrigark/registry.hpp"

#include <json.hpp>

namespace mrigark {

/// JSON method schema: {name, order, embedded_order, kind, c, A, b, b_hat,
/// gamma, gamma_hat}; rational entries render as "p/q" strings, irrational
/// ones as 40-digit decimal strings.
nlohmann::json method_to_json(const ExactMethod& m);

/// Accepts integers, "p/q" strings (exact rational storage), or decimal
/// literals (50-digit float storage).
ExactMethod method_from_json(const nlohmann::json& j);

ExactMethod load_method_file(const std::string& path);

} // namespace mrigark
