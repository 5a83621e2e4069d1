#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "wsl/pi_process.hpp"

namespace wsl::trace_json {

using Json = nlohmann::ordered_json;

inline constexpr const char *kTraceSchema = "walksat-lab.trace.v1";

Json params_to_json(const pi::ProcessParams &p);

/// {"header": {...}, "steps": [...]}. Clause, slot and variable indices are
/// 1-based. Per-step A/N/Z sets are included when the trace recorded them,
/// the formula when `formula` is non-null.
Json trace_to_json(const pi::Trace &trace, const Formula *formula = nullptr);

/// Choice script: JSON array of {"t", "i", "j"}, all 1-based, t = 1, 2, ...
/// in order. Throws std::invalid_argument naming the offending entry.
std::vector<pi::Choice> parse_script(const Json &script);

struct Mismatch {
  bool equal = true;
  std::string path; ///< JSON pointer of the first divergence
  std::string expected;
  std::string actual;
};

/// Depth-first comparison in document order; reports the first divergent
/// field, including missing and extra keys.
Mismatch compare(const Json &expected, const Json &actual);

} // namespace wsl::trace_json
