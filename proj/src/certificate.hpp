#pragma once

#include <string>

#include "direct.hpp"
#include "dp_prob.hpp"

namespace ptast {

// Certificate schema: {"system", "property", "verdict", "tree"}; tree nodes
// {"processor", "params", "interpretation"?, "children"}; rationals as "a/b"
// strings, field order fixed, symbols under their raw names.
std::string certificate_json_dp(const PTRS& r, const ProbOutcome& outcome);
std::string certificate_json_direct(const PTRS& r, const std::optional<DirectProof>& proof);

// Replays a serialized certificate against the system: every processor
// application is recomputed, every interpretation re-checked concretely, and
// leaves must be empty problems. Unknown certificates validate trivially.
CheckReport validate_certificate_json(const PTRS& r, const std::string& json_text);

}  // namespace ptast
