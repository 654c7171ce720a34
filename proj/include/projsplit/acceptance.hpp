#pragma once

#include <iosfwd>

namespace projsplit {

/// Runs the full acceptance suite, printing one pass/fail line per
/// criterion. Returns true iff every criterion passed.
bool run_acceptance(std::ostream& out);

}  // namespace projsplit
