#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qram/config.hpp"

namespace qram::verify {

struct CheckResult {
    std::string module;
    std::string invariant;
    bool passed = false;
    std::string detail;  // counterexample inputs on failure
};

// Fast suite covers every module's cheap invariants; the full suite adds the
// 1e5-trial Monte Carlo consistency checks and the fitted roll-off test.
std::vector<CheckResult> run_invariant_suite(const RunConfig& cfg, bool full, std::uint64_t seed);

}  // namespace qram::verify
