#pragma once
#include <ostream>

namespace epc {

/// Runs the built-in desk checks (worked 2-point example, endpoint
/// identities, attention invariance, Wilcoxon anchors) and prints one line
/// per check. Returns the number of failed checks.
int run_selftest(std::ostream& os);

} // namespace epc
