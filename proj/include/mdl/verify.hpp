#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mdl {

struct SuiteResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct VerifyOptions {
    std::uint64_t sandwich_trials = 10000; // per configuration
    int gram_draws = 1000;
    int block_draws = 1000; // cp/zp structural identities
    int order_draws = 1000; // mmse-vs-zf SINR ordering
    std::uint64_t master_seed = 0x5eedULL;
    int threads = 0;
};

/// Runs every structural invariant suite and reports one line per suite.
/// All suites must pass for the toolkit to be considered healthy.
std::vector<SuiteResult> run_verification(const VerifyOptions& opts = {});

} // namespace mdl
