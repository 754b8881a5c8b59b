#include "mdl/simkit.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>

#include "mdl/errors.hpp"
#include "mdl/numkernel.hpp"
#include "mdl/receivers.hpp"

namespace mdl {

namespace {

constexpr std::uint64_t kPointSalt = 0x5157454550504f49ULL; // per-point master derivation

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

// Effective channel for SINR purposes; for precoded cp the transmit DFT is
// folded into the matrix.
Eigen::MatrixXcd effective_matrix(ChannelRealization&& ch,
                                  const Eigen::MatrixXcd* precoder) {
    if (precoder) return ch.matrix * (*precoder);
    return std::move(ch.matrix);
}

struct PointPlan {
    std::uint64_t target;
    std::uint64_t ceiling;
};

PointPlan plan_for(std::uint64_t trials, const SweepOptions& opts) {
    PointPlan plan{trials, trials};
    if (opts.min_hits > 0 && opts.max_trials > trials) plan.ceiling = opts.max_trials;
    return plan;
}

template <class TrialFn>
SweepPoint run_point(double snr_db, std::uint64_t point_master, std::uint64_t trials,
                     std::uint64_t units_per_trial, int threads,
                     const SweepOptions& opts, TrialFn&& fn) {
    const PointPlan plan = plan_for(trials, opts);
    std::uint64_t done = 0;
    std::uint64_t hits = 0;
    std::uint64_t target = plan.target;
    for (;;) {
        hits += detail::run_hits(point_master, done, target, threads, fn);
        done = target;
        if (opts.min_hits == 0 || hits >= opts.min_hits || done >= plan.ceiling) break;
        target = std::min(plan.ceiling, done * 2);
    }
    SweepPoint pt;
    pt.snr_db = snr_db;
    pt.rho = db_to_linear(snr_db);
    pt.trials = done;
    pt.hits = hits;
    const std::uint64_t units = done * units_per_trial;
    pt.p_hat = units ? static_cast<double>(hits) / static_cast<double>(units) : 0.0;
    const WilsonInterval ci = wilson(hits, units);
    pt.ci_low = ci.low;
    pt.ci_high = ci.high;
    return pt;
}

} // namespace

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("MDL_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

WilsonInterval wilson(std::uint64_t hits, std::uint64_t n, double z) {
    if (n == 0) return {0.0, 1.0};
    if (hits > n) throw numeric_error("wilson: hits exceed trials");
    const double p = static_cast<double>(hits) / static_cast<double>(n);
    const double z2n = z * z / static_cast<double>(n);
    const double denom = 1.0 + z2n;
    const double center = (p + z2n / 2.0) / denom;
    const double half =
        z * std::sqrt(p * (1.0 - p) / static_cast<double>(n) + z2n / (4.0 * static_cast<double>(n))) /
        denom;
    WilsonInterval ci{std::max(0.0, center - half), std::min(1.0, center + half)};
    if (hits == 0) ci.low = 0.0;
    if (hits == n) ci.high = 1.0;
    return ci;
}

SweepResult outage_sweep(const SystemConfig& cfg,
                         const std::vector<double>& snr_grid_db,
                         std::uint64_t trials_per_point, std::uint64_t master_seed,
                         const SweepOptions& opts) {
    cfg.validate();
    if (trials_per_point < 1) throw config_error("trials: must be >= 1");
    if (snr_grid_db.empty()) throw config_error("grid: empty SNR grid");
    const int threads = resolve_threads(opts.threads);

    Eigen::MatrixXcd precoder;
    const Eigen::MatrixXcd* precoder_ptr = nullptr;
    if (cfg.scheme == Scheme::cp && cfg.cp_precode) {
        precoder = augmented_dft(cfg.L_d, cfg.M).adjoint();
        precoder_ptr = &precoder;
    }

    SweepResult result;
    result.config = cfg;
    result.master_seed = master_seed;
    result.kind = "outage";

    for (std::size_t p = 0; p < snr_grid_db.size(); ++p) {
        const double rho = db_to_linear(snr_grid_db[p]);
        const std::uint64_t point_master = trial_seed(master_seed ^ kPointSalt, p);
        auto trial = [&cfg, rho, precoder_ptr](std::uint64_t seed) -> std::uint64_t {
            SplitMix64 rng(seed);
            const Eigen::MatrixXcd H =
                effective_matrix(sample_channel(cfg, rng), precoder_ptr);
            Eigen::VectorXd gamma;
            try {
                gamma = (cfg.receiver == ReceiverKind::mmse) ? mmse_sinr(H, rho)
                                                             : zf_sinr(H, rho);
            } catch (const rank_error&) {
                return 1; // an uninvertible draw cannot carry the rate
            }
            if (cfg.encoding == Encoding::separate) {
                const double per_stream = cfg.R / cfg.M;
                for (Eigen::Index k = 0; k < gamma.size(); ++k)
                    if (std::log2(1.0 + gamma[k]) < per_stream) return 1;
                return 0;
            }
            if (cfg.scheme == Scheme::mac) {
                double bits = 0.0;
                for (int k = 0; k < cfg.M; ++k) bits += std::log2(1.0 + gamma[k]);
                return bits < cfg.R ? 1 : 0;
            }
            const double info = mutual_info(gamma, cfg.block_len());
            return outage_indicator(info, cfg.R) ? 1 : 0;
        };
        result.points.push_back(run_point(snr_grid_db[p], point_master,
                                          trials_per_point, 1, threads, opts, trial));
    }
    return result;
}

SweepResult ser_sweep(const SystemConfig& cfg,
                      const std::vector<double>& snr_grid_db,
                      std::uint64_t symbols_per_point, std::uint64_t master_seed,
                      const SweepOptions& opts) {
    cfg.validate();
    if (cfg.scheme != Scheme::flat)
        throw config_error("scheme: ser sweeps are defined for the flat scheme");
    if (symbols_per_point < 1) throw config_error("trials: must be >= 1");
    if (snr_grid_db.empty()) throw config_error("grid: empty SNR grid");
    const int threads = resolve_threads(opts.threads);

    SweepResult result;
    result.config = cfg;
    result.master_seed = master_seed;
    result.kind = "ser";

    for (std::size_t p = 0; p < snr_grid_db.size(); ++p) {
        const double rho = db_to_linear(snr_grid_db[p]);
        const std::uint64_t point_master = trial_seed(master_seed ^ kPointSalt, p);
        auto trial = [&cfg, rho](std::uint64_t seed) -> std::uint64_t {
            SplitMix64 rng(seed);
            const ChannelRealization ch = sample_flat(cfg.M, cfg.N, rng);
            Eigen::VectorXcd tx(cfg.M);
            const auto& constellation = qpsk_constellation();
            for (int k = 0; k < cfg.M; ++k)
                tx[k] = constellation[rng.bits(2)];
            return static_cast<std::uint64_t>(detect_streams(ch.matrix, rho, tx, rng));
        };
        result.points.push_back(run_point(snr_grid_db[p], point_master,
                                          symbols_per_point,
                                          static_cast<std::uint64_t>(cfg.M), threads,
                                          opts, trial));
    }
    return result;
}

SandwichReport sandwich_check(const SystemConfig& cfg, std::uint64_t trials,
                              std::uint64_t master_seed, const SweepOptions& opts) {
    cfg.validate();
    if (cfg.scheme != Scheme::flat && cfg.scheme != Scheme::mac)
        throw config_error("scheme: sandwich check covers flat and mac");
    if (trials < 1) throw config_error("trials: must be >= 1");
    const int threads = resolve_threads(opts.threads);

    // For mac, the stacked channel is one joint transmitter: K*M streams at
    // the aggregate rate.
    const int M_eff = cfg.streams();
    const double R_eff = (cfg.scheme == Scheme::mac) ? cfg.K * cfg.R : cfg.R;
    const int L = std::min(M_eff, cfg.N);

    static const double snr_ladder_db[] = {0.0, 10.0, 20.0, 30.0};
    constexpr std::size_t ladder_len = sizeof(snr_ladder_db) / sizeof(double);

    SandwichReport report;
    report.trials = trials;

    std::atomic<std::uint64_t> first_bad{~0ULL};
    for (std::size_t li = 0; li < ladder_len; ++li) {
        const double rho = db_to_linear(snr_ladder_db[li]);
        const std::uint64_t point_master = trial_seed(master_seed ^ kPointSalt, li);
        const std::uint64_t share =
            trials / ladder_len + (li < trials % ladder_len ? 1 : 0);
        auto trial = [&cfg, rho, M_eff, R_eff, L, &first_bad](std::uint64_t seed)
            -> std::uint64_t {
            SplitMix64 rng(seed);
            const ChannelRealization ch = sample_channel(cfg, rng);
            const Eigen::MatrixXcd& H = ch.matrix;
            const Eigen::VectorXd gamma = mmse_sinr(H, rho);
            const bool outage = outage_indicator(mutual_info(gamma, 1), R_eff);
            const Eigen::VectorXd lambda = gram_eig(H.adjoint() * H).eigenvalues.head(L);
            const bool upper = jensen_upper_event(lambda, rho, R_eff, M_eff, cfg.N);
            const bool lower = jensen_lower_event(H, rho, R_eff, M_eff);
            if (sandwich_ok(lower, outage, upper)) return 0;
            std::uint64_t expected = ~0ULL;
            first_bad.compare_exchange_strong(expected, seed);
            return 1;
        };
        report.violations += detail::run_hits(point_master, 0, share, threads, trial);
    }
    report.pass = report.violations == 0;
    if (!report.pass) report.first_bad_seed = first_bad.load();
    return report;
}

std::vector<std::size_t> monotonicity_violations(const SweepResult& sweep) {
    std::vector<std::size_t> bad;
    for (std::size_t i = 0; i + 1 < sweep.points.size(); ++i)
        if (sweep.points[i + 1].ci_low > sweep.points[i].ci_high)
            bad.push_back(i);
    return bad;
}

} // namespace mdl
