#include "mdl/fitters.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "mdl/errors.hpp"

namespace mdl {

SlopeEstimate estimate_slope(const SweepResult& sweep, double lo_db, double hi_db,
                             std::uint64_t hit_floor) {
    std::vector<double> x; // log10(rho)
    std::vector<double> y; // log10(p_hat)
    for (const SweepPoint& pt : sweep.points) {
        if (pt.snr_db < lo_db || pt.snr_db > hi_db) continue;
        if (pt.hits < hit_floor) continue;
        x.push_back(pt.snr_db / 10.0);
        y.push_back(std::log10(pt.p_hat));
    }
    const int n = static_cast<int>(x.size());
    if (n < 2)
        throw numeric_error("estimate_slope: fewer than 2 window points reach the hit floor of " +
                            std::to_string(hit_floor) + " events");

    double sx = 0, sy = 0;
    for (int i = 0; i < n; ++i) {
        sx += x[static_cast<std::size_t>(i)];
        sy += y[static_cast<std::size_t>(i)];
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (int i = 0; i < n; ++i) {
        const double dx = x[static_cast<std::size_t>(i)] - mx;
        const double dy = y[static_cast<std::size_t>(i)] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx <= 0.0)
        throw numeric_error("estimate_slope: window points share one SNR value");

    const double slope = sxy / sxx;
    SlopeEstimate est;
    est.d_hat = -slope;
    est.window_lo_db = lo_db;
    est.window_hi_db = hi_db;
    est.points_used = n;
    if (n > 2) {
        const double ssr = std::max(0.0, syy - slope * sxy);
        est.std_error = std::sqrt(ssr / (n - 2) / sxx);
    }
    return est;
}

Verdict compare(const SlopeEstimate& estimate, const DiversityValue& predicted,
                double tol) {
    if (!(tol > 0.0)) throw config_error("tolerance: must be > 0");
    Verdict v;
    v.d_hat = estimate.d_hat;
    v.std_error = estimate.std_error;
    v.predicted = predicted.value;
    v.tolerance = tol;
    v.delta = std::abs(estimate.d_hat - static_cast<double>(predicted.value));
    v.pass = v.delta <= tol;
    v.window_lo_db = estimate.window_lo_db;
    v.window_hi_db = estimate.window_hi_db;
    return v;
}

} // namespace mdl
