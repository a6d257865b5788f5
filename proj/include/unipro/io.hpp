#pragma once

// JSON algebra files:
//   {"p": 5, "precision": 24, "rank": 3, "basis": ["x", "e2", "e3"],
//    "brackets": [{"i": 1, "j": 0, "coords": [0, 0, 7]}, ...]}
// Indices are 0-based. A coordinate is a JSON integer or a little-endian
// p-adic digit string "d0.d1.d2". Omitted pairs bracket to zero.

#include <string>

#include <json.hpp>
#include "unipro/lie_algebra.hpp"

namespace unipro {

nlohmann::json scalar_to_json(const PAdic& x);
PAdic scalar_from_json(const PAdicContext& ctx, const nlohmann::json& j);

nlohmann::json algebra_to_json(const LieAlgebraZp& L);
/// Validates antisymmetry of repeated pairs and runs jacobi_check; throws
/// PreconditionError on any violation.
LieAlgebraZp algebra_from_json(const nlohmann::json& j);

void save_json(const std::string& path, const nlohmann::json& j);
nlohmann::json load_json(const std::string& path);

}  // namespace unipro
