#include "mdl/verify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "mdl/channels.hpp"
#include "mdl/formulas.hpp"
#include "mdl/numkernel.hpp"
#include "mdl/receivers.hpp"
#include "mdl/rng.hpp"
#include "mdl/simkit.hpp"

namespace mdl {

namespace {

SuiteResult suite_sandwich(const VerifyOptions& opts) {
    SuiteResult res{"jensen-sandwich", true, ""};
    struct Case {
        SystemConfig cfg;
        const char* label;
    };
    std::vector<Case> cases;
    auto flat = [](int M, int N) {
        SystemConfig c;
        c.M = M;
        c.N = N;
        c.R = 4.0;
        return c;
    };
    cases.push_back({flat(2, 2), "flat 2x2"});
    cases.push_back({flat(2, 3), "flat 2x3"});
    cases.push_back({flat(3, 2), "flat 3x2"});
    SystemConfig mac;
    mac.scheme = Scheme::mac;
    mac.K = 2;
    mac.M = 2;
    mac.N = 4;
    mac.R = 2.0;
    cases.push_back({mac, "mac K=2 2x4"});

    std::uint64_t total = 0;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        SweepOptions sw;
        sw.threads = opts.threads;
        const SandwichReport rep = sandwich_check(
            cases[i].cfg, opts.sandwich_trials, trial_seed(opts.master_seed, i), sw);
        total += rep.trials;
        if (!rep.pass) {
            res.pass = false;
            std::ostringstream oss;
            oss << cases[i].label << ": " << rep.violations
                << " violations, first seed " << rep.first_bad_seed;
            res.detail = oss.str();
            return res;
        }
    }
    res.detail = std::to_string(total) + " draws, 0 violations";
    return res;
}

SuiteResult suite_sturmian(const VerifyOptions& opts) {
    SuiteResult res{"sturmian-interlacing", true, ""};
    SplitMix64 rng(trial_seed(opts.master_seed, 101));
    for (int d = 0; d < opts.gram_draws; ++d) {
        const int n = 2 + static_cast<int>(rng.bits(3)) % 7; // 2..8
        const int m = n + static_cast<int>(rng.bits(2));     // n..n+3
        Eigen::MatrixXcd A(m, n);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) A(i, j) = rng.cgauss();
        const Eigen::MatrixXcd G = A.adjoint() * A;
        const SturmianReport rep = sturmian_check(G, n - 1);
        if (!rep.pass) {
            res.pass = false;
            res.detail = "draw " + std::to_string(d) + ": " + rep.detail;
            return res;
        }
    }
    res.detail = std::to_string(opts.gram_draws) + " Gram matrices interlace";
    return res;
}

SuiteResult suite_cp_diagonalization(const VerifyOptions& opts) {
    SuiteResult res{"cp-diagonalization", true, ""};
    SplitMix64 rng(trial_seed(opts.master_seed, 202));
    double worst_recon = 0.0;
    double worst_eig = 0.0;
    for (int d = 0; d < opts.block_draws; ++d) {
        const int M = 1 + static_cast<int>(rng.bits(2)) % 3;
        const int N = 1 + static_cast<int>(rng.bits(2)) % 3;
        const int nu = static_cast<int>(rng.bits(2)) % 3;
        const int L_d = nu + 1 + static_cast<int>(rng.bits(2)) % 3;
        const auto taps = sample_isi(M, N, nu, rng);
        const ChannelRealization cp = build_cp(taps, L_d);
        const auto blocks = cp_frequency_blocks(taps, L_d);

        Eigen::MatrixXcd Lambda = Eigen::MatrixXcd::Zero(N * L_d, M * L_d);
        for (int k = 0; k < L_d; ++k)
            Lambda.block(k * N, k * M, N, M) = blocks[static_cast<std::size_t>(k)];
        const Eigen::MatrixXcd QR = augmented_dft(L_d, N);
        const Eigen::MatrixXcd QT = augmented_dft(L_d, M);
        const double recon = (cp.matrix - QR.adjoint() * Lambda * QT).norm();
        worst_recon = std::max(worst_recon, recon);

        Eigen::VectorXd lhs = gram_eig(cp.matrix.adjoint() * cp.matrix).eigenvalues;
        std::vector<double> rhs;
        for (const auto& B : blocks) {
            const Eigen::VectorXd ev = gram_eig(B.adjoint() * B).eigenvalues;
            for (Eigen::Index k = 0; k < ev.size(); ++k) rhs.push_back(ev[k]);
        }
        std::sort(rhs.begin(), rhs.end(), std::greater<double>());
        double eig_err = 0.0;
        for (Eigen::Index k = 0; k < lhs.size(); ++k)
            eig_err = std::max(eig_err,
                               std::abs(lhs[k] - rhs[static_cast<std::size_t>(k)]));
        worst_eig = std::max(worst_eig, eig_err);

        if (recon > 1e-10 || eig_err > 1e-8) {
            res.pass = false;
            std::ostringstream oss;
            oss << "draw " << d << ": reconstruction " << recon
                << ", eigenvalue mismatch " << eig_err;
            res.detail = oss.str();
            return res;
        }
    }
    std::ostringstream oss;
    oss << opts.block_draws << " draws, worst reconstruction " << worst_recon
        << ", worst eigenvalue mismatch " << worst_eig;
    res.detail = oss.str();
    return res;
}

SuiteResult suite_zp_blocks(const VerifyOptions& opts) {
    SuiteResult res{"zp-diagonal-blocks", true, ""};
    SplitMix64 rng(trial_seed(opts.master_seed, 303));
    double worst = 0.0;
    for (int d = 0; d < opts.block_draws; ++d) {
        const int M = 1 + static_cast<int>(rng.bits(2)) % 3;
        const int N = 1 + static_cast<int>(rng.bits(2)) % 3;
        const int nu = static_cast<int>(rng.bits(2)) % 3;
        const int L_d = 1 + static_cast<int>(rng.bits(3)) % 5;
        const auto taps = sample_isi(M, N, nu, rng);
        const ChannelRealization zp = build_zp(taps, L_d);

        Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(M, M);
        for (const auto& H : taps) D += H.adjoint() * H;
        const Eigen::MatrixXcd G = zp.matrix.adjoint() * zp.matrix;
        for (int j = 0; j < L_d; ++j) {
            const double err = (G.block(j * M, j * M, M, M) - D).cwiseAbs().maxCoeff();
            worst = std::max(worst, err);
            if (err > 1e-10) {
                res.pass = false;
                res.detail = "draw " + std::to_string(d) + ", block " +
                             std::to_string(j) + ": error " + std::to_string(err);
                return res;
            }
        }
    }
    std::ostringstream oss;
    oss << opts.block_draws << " draws, worst block error " << worst;
    res.detail = oss.str();
    return res;
}

SuiteResult suite_qip(const VerifyOptions&) {
    SuiteResult res{"qip-closed-form", true, ""};
    for (long omega = 0; omega <= 12; ++omega)
        for (long ell = 1; ell <= 6; ++ell) {
            const QipSolution closed = qip_solve(omega, ell);
            const QipSolution brute = qip_bruteforce(omega, ell);
            long sum = 0;
            for (long v : closed.allocation) sum += v;
            const bool two_valued =
                closed.allocation.empty() ||
                closed.allocation.back() - closed.allocation.front() <= 1;
            if (closed.objective != brute.objective || sum != omega || !two_valued) {
                res.pass = false;
                std::ostringstream oss;
                oss << "Omega=" << omega << " ell=" << ell << ": closed "
                    << closed.objective << " vs brute " << brute.objective;
                res.detail = oss.str();
                return res;
            }
        }
    res.detail = "all Omega <= 12, ell <= 6 match the enumeration";
    return res;
}

SuiteResult suite_resampling(const VerifyOptions& opts) {
    SuiteResult res{"dft-resampling", true, ""};
    SplitMix64 rng(trial_seed(opts.master_seed, 404));
    const std::pair<int, int> lengths[] = {{2, 4}, {3, 9}, {4, 8}};
    double worst = 0.0;
    for (const auto& [L1, L2] : lengths)
        for (int N = 1; N <= 2; ++N)
            for (int nu = 0; nu < L1; ++nu)
                for (int rep = 0; rep < 8; ++rep) {
                    std::vector<Eigen::VectorXcd> taps(static_cast<std::size_t>(nu) + 1);
                    for (auto& h : taps) {
                        h.resize(N);
                        for (int i = 0; i < N; ++i) h[i] = rng.cgauss();
                    }
                    const ResamplingReport rep2 = dft_resampling_check(taps, L1, L2);
                    worst = std::max(worst, rep2.max_err);
                    if (!rep2.pass) {
                        res.pass = false;
                        std::ostringstream oss;
                        oss << "L1=" << L1 << " L2=" << L2 << " N=" << N
                            << " nu=" << nu << ": error " << rep2.max_err;
                        res.detail = oss.str();
                        return res;
                    }
                }
    std::ostringstream oss;
    oss << "subset identity holds, worst entry error " << worst;
    res.detail = oss.str();
    return res;
}

SuiteResult suite_sinr_order(const VerifyOptions& opts) {
    SuiteResult res{"mmse-dominates-zf", true, ""};
    SplitMix64 rng(trial_seed(opts.master_seed, 505));
    for (int d = 0; d < opts.order_draws; ++d) {
        const int M = 1 + static_cast<int>(rng.bits(2)) % 3;
        const int N = M + static_cast<int>(rng.bits(2)) % 3; // full column rank a.s.
        const double rho = std::pow(10.0, static_cast<double>(rng.bits(5) % 31) / 10.0);
        const ChannelRealization ch = sample_flat(M, N, rng);
        const Eigen::VectorXd gm = mmse_sinr(ch.matrix, rho);
        const Eigen::VectorXd gz = zf_sinr(ch.matrix, rho);
        for (Eigen::Index k = 0; k < gm.size(); ++k)
            if (gm[k] < gz[k] - 1e-9) {
                res.pass = false;
                std::ostringstream oss;
                oss << "draw " << d << " stream " << k << ": mmse " << gm[k]
                    << " < zf " << gz[k];
                res.detail = oss.str();
                return res;
            }
    }
    res.detail = std::to_string(opts.order_draws) + " full-rank draws ordered";
    return res;
}

} // namespace

std::vector<SuiteResult> run_verification(const VerifyOptions& opts) {
    std::vector<SuiteResult> results;
    results.push_back(suite_sandwich(opts));
    results.push_back(suite_sturmian(opts));
    results.push_back(suite_cp_diagonalization(opts));
    results.push_back(suite_zp_blocks(opts));
    results.push_back(suite_qip(opts));
    results.push_back(suite_resampling(opts));
    results.push_back(suite_sinr_order(opts));
    return results;
}

} // namespace mdl
