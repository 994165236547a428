#pragma once

#include <ostream>

namespace singlab::tool {

/// Small exhaustive oracle checks; returns the number of failed suites.
int run_selftest(std::ostream& out, int threads);

}  // namespace singlab::tool
