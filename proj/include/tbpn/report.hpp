#pragma once

// Serialization of check reports: a JSON document that is byte-identical
// across runs with the same inputs, and a human-readable table.

#include "tbpn/checks.hpp"

#include <string>

namespace tbpn {

/// {"scenario", "seed", "checks": [{"id", "anchor", "residual", "tol",
/// "verdict", "worst_point": {"q", "u"}}], "passed"}. Not-applicable checks
/// also carry "reason"; runtime is left out so the bytes are reproducible.
std::string toJson(const CheckReport& report);

/// One line per check; with `quiet`, only failures and the summary.
std::string toText(const CheckReport& report, bool quiet = false);

}  // namespace tbpn
