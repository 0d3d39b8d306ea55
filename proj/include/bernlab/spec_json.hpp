#pragma once

#include "bernlab/marginals.hpp"

#include <json.hpp>

#include <string>

namespace bernlab {

using Json = nlohmann::json;

Json spec_to_json(const ActionSpec& spec);
// Parses and validates; unknown keys are rejected.
ActionSpec spec_from_json(const Json& j);
ActionSpec load_spec(const std::string& path);
void save_spec(const ActionSpec& spec, const std::string& path);

// Compact dump with sorted keys.
std::string canonical_json(const Json& j);
// 64-bit FNV-1a, as 16 lower-case hex digits.
std::string fnv1a_hex(const std::string& bytes);
std::string spec_digest(const ActionSpec& spec);

// Rationals in JSON are strings "p/q"; integers and decimal literals are accepted on input.
Rational json_rational(const Json& j, const std::string& what);

}  // namespace bernlab
