// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>

namespace prach {

// Quick oracle and property checks; prints one line per check, returns true if all pass.
bool selftest(std::ostream& out);

} // namespace prach
