#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "mdl/channels.hpp"
#include "mdl/rng.hpp"

namespace mdl {

inline const char* engine_version() { return "mdl 0.1.0"; }

/// One SNR grid point of a Monte Carlo sweep. `trials` counts channel
/// realizations; for symbol-error sweeps each trial contributes `streams`
/// Bernoulli units, so hits may exceed trials there. p_hat and the 95%
/// Wilson interval are computed over the Bernoulli units.
struct SweepPoint {
    double snr_db = 0.0;
    double rho = 1.0;
    std::uint64_t trials = 0;
    std::uint64_t hits = 0;
    double p_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;
};

struct SweepResult {
    SystemConfig config;
    std::vector<SweepPoint> points; // ascending snr_db
    std::uint64_t master_seed = 0;
    std::string engine = engine_version();
    std::string kind; // "outage" or "ser"
};

struct SweepOptions {
    int threads = 0;            // 0: --threads/MDL_THREADS/hardware default
    std::uint64_t min_hits = 0; // extend a point until it has this many hits
    std::uint64_t max_trials = 0; // hard per-point ceiling for the extension
};

/// Worker count from an explicit request, the MDL_THREADS environment
/// variable, or hardware concurrency, in that order.
int resolve_threads(int requested);

struct WilsonInterval {
    double low = 0.0;
    double high = 1.0;
};

/// 95% (z = 1.96) Wilson score interval; exact 0/1 endpoints at 0 or n hits.
WilsonInterval wilson(std::uint64_t hits, std::uint64_t n, double z = 1.96);

/// Empirical outage probability over an SNR grid (dB). Draws fresh channels
/// per the config's scheme, equalizes, and counts mutual-information outages.
SweepResult outage_sweep(const SystemConfig& cfg,
                         const std::vector<double>& snr_grid_db,
                         std::uint64_t trials_per_point,
                         std::uint64_t master_seed,
                         const SweepOptions& opts = {});

/// Uncoded QPSK symbol error rate over an SNR grid. Flat scheme only.
SweepResult ser_sweep(const SystemConfig& cfg,
                      const std::vector<double>& snr_grid_db,
                      std::uint64_t symbols_per_point,
                      std::uint64_t master_seed,
                      const SweepOptions& opts = {});

struct SandwichReport {
    std::uint64_t trials = 0;
    std::uint64_t violations = 0;
    std::uint64_t first_bad_seed = 0; // trial seed of the first violation
    bool pass = true;
};

/// True when the implication chain lower => outage => upper holds.
inline bool sandwich_ok(bool lower, bool outage, bool upper) {
    return !(lower && !outage) && !(outage && !upper);
}

/// Per-realization check that the two bounding events bracket outage on
/// every draw, swept over a small internal SNR ladder. Flat or mac scheme;
/// for mac the stacked channel is treated as one K*M-stream transmitter at
/// the aggregate rate K*R.
SandwichReport sandwich_check(const SystemConfig& cfg, std::uint64_t trials,
                              std::uint64_t master_seed,
                              const SweepOptions& opts = {});

/// Indices i where point i+1 sits significantly above point i
/// (non-overlapping Wilson intervals); statistically a sweep should decay.
std::vector<std::size_t> monotonicity_violations(const SweepResult& sweep);

namespace detail {

/// Runs fn(trial_seed(point_master, i)) for i in [begin, end) across
/// `threads` workers and returns the summed hit count. Partitioning is
/// contiguous and the sum is integer, so the result is independent of the
/// worker count.
template <class TrialFn>
std::uint64_t run_hits(std::uint64_t point_master, std::uint64_t begin,
                       std::uint64_t end, int threads, TrialFn&& fn) {
    if (end <= begin) return 0;
    const std::uint64_t n = end - begin;
    const int T = static_cast<int>(
        std::min<std::uint64_t>(static_cast<std::uint64_t>(threads < 1 ? 1 : threads), n));
    if (T <= 1) {
        std::uint64_t hits = 0;
        for (std::uint64_t i = begin; i < end; ++i)
            hits += fn(trial_seed(point_master, i));
        return hits;
    }
    std::vector<std::uint64_t> partial(static_cast<std::size_t>(T), 0);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(T));
    const std::uint64_t chunk = n / T;
    const std::uint64_t rem = n % T;
    std::uint64_t start = begin;
    for (int t = 0; t < T; ++t) {
        const std::uint64_t size = chunk + (static_cast<std::uint64_t>(t) < rem ? 1 : 0);
        const std::uint64_t stop = start + size;
        pool.emplace_back([&fn, &partial, point_master, start, stop, t] {
            std::uint64_t hits = 0;
            for (std::uint64_t i = start; i < stop; ++i)
                hits += fn(trial_seed(point_master, i));
            partial[static_cast<std::size_t>(t)] = hits;
        });
        start = stop;
    }
    for (auto& th : pool) th.join();
    std::uint64_t total = 0;
    for (std::uint64_t h : partial) total += h;
    return total;
}

} // namespace detail

} // namespace mdl
