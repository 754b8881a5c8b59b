#pragma once

#include <cstdint>

#include "mdl/formulas.hpp"
#include "mdl/simkit.hpp"

namespace mdl {

/// Least-squares diversity estimate from a sweep: minus the slope of
/// log10(p_hat) against log10(rho) over the points inside the window.
struct SlopeEstimate {
    double d_hat = 0.0;
    double std_error = 0.0;
    double window_lo_db = 0.0;
    double window_hi_db = 0.0;
    int points_used = 0;
};

/// Fits the window [lo_db, hi_db]. Points with fewer than hit_floor hits are
/// excluded; fewer than two qualifying points raises numeric_error naming
/// the floor.
SlopeEstimate estimate_slope(const SweepResult& sweep, double lo_db,
                             double hi_db, std::uint64_t hit_floor = 100);

struct Verdict {
    double d_hat = 0.0;
    double std_error = 0.0;
    long predicted = 0;
    double tolerance = 0.0;
    double delta = 0.0;
    bool pass = false;
    double window_lo_db = 0.0;
    double window_hi_db = 0.0;
};

/// Pass iff |d_hat - predicted| <= tol.
Verdict compare(const SlopeEstimate& estimate, const DiversityValue& predicted,
                double tol);

} // namespace mdl
