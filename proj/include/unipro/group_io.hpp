#pragma once

// Group descriptor files:
//   {"algebra": "g4.json" | {...inline algebra...},
//    "p": 5, "precision": 24, "bch_path": "metabelian", "bch_degree": 13,
//    "certificate": {"v0": 2, "degree": 13},
//    "split": {"index": 0, "sign": -1} | null,
//    "family": {"m": 4, "d": "7"} | absent}
// Elements: {"chart": "bch" | "split", "coords": ["d0.d1...", ...]}.

#include <string>

#include <json.hpp>

#include "unipro/uniform_group.hpp"

namespace unipro {

/// `algebra_ref` is written as the algebra field when non-empty; otherwise
/// the algebra is inlined.
nlohmann::json group_to_json(const UniformGroup& G, const std::string& algebra_ref = "");
/// Rebuilds the group (algebra paths are resolved against base_dir) and
/// checks the recorded metadata against the rebuilt one: ConsistencyError
/// on any difference.
UniformGroup group_from_json(const nlohmann::json& j, const std::string& base_dir = ".");

nlohmann::json element_to_json(const UniformGroup& G, const GroupElement& g);
GroupElement element_from_json(const UniformGroup& G, const nlohmann::json& j);

}  // namespace unipro
