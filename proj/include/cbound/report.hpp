#pragma once

// JSON encodings for the machine-readable reports. Complex matrices are
// nested row-major arrays of [re, im] pairs.

#include <json.hpp>

#include "cbound/bounds.hpp"
#include "cbound/conjecture.hpp"
#include "cbound/sphere_averaging.hpp"

namespace cbound {

nlohmann::json matrix_to_json(const ComplexMatrixd& m);
ComplexMatrixd matrix_from_json(const nlohmann::json& j);

nlohmann::json bounds_to_json(const BoundReport& r, const InequalityFlags& flags);
nlohmann::json result_to_json(const OptimizationResult& r);
nlohmann::json estimate_to_json(const MCEstimate& e, double target);

}  // namespace cbound
