#pragma once

#include <stdexcept>

namespace mdl {

/// Invalid system/experiment configuration. The CLI maps this to exit code 1.
struct config_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Numeric failure while running (singular solve, bad sweep data). Exit code 2.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Effective channel is rank deficient beyond tolerance.
struct rank_error : numeric_error {
    using numeric_error::numeric_error;
};

} // namespace mdl
