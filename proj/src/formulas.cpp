#include "mdl/formulas.hpp"

#include <algorithm>
#include <cmath>

#include "mdl/errors.hpp"

namespace mdl {

namespace {

constexpr double kSnap = 1e-9;

long abs_diff(int a, int b) { return std::labs(static_cast<long>(a) - b); }

// ceil((M*2^{-R/M} - (M-N)^+)^+): the step variable of the flat formula.
long flat_step_count(double R, int M, int N) {
    double x = M * std::exp2(-R / M) - static_cast<double>(std::max(M - N, 0));
    return ceil_snapped(std::max(x, 0.0));
}

void check_rate_antennas(double R, int M, int N) {
    if (!(R > 0.0)) throw config_error("R: must be > 0");
    if (M < 1 || N < 1) throw config_error("M/N: must be >= 1");
}

} // namespace

long ceil_snapped(double x) {
    const double r = std::round(x);
    if (std::abs(x - r) <= kSnap) return static_cast<long>(r);
    return static_cast<long>(std::ceil(x));
}

long floor_snapped(double x) {
    const double r = std::round(x);
    if (std::abs(x - r) <= kSnap) return static_cast<long>(r);
    return static_cast<long>(std::floor(x));
}

DiversityValue diversity_flat(double R, int M, int N) {
    check_rate_antennas(R, M, N);
    const long S = flat_step_count(R, M, N);
    return {S * S + abs_diff(N, M) * S, "flat_mmse_joint", ""};
}

DiversityValue diversity_flat_upper_at_integer_points(double R, int M, int N) {
    check_rate_antennas(R, M, N);
    double x = M * std::exp2(-R / M) + 1.0 - static_cast<double>(std::max(M - N, 0));
    const long F = floor_snapped(std::max(x, 0.0));
    return {F * F + abs_diff(N, M) * F, "flat_mmse_joint_upper",
            "differs from flat_mmse_joint only where M*2^(-R/M) is an integer"};
}

std::vector<double> flat_threshold_rates(int M, int N) {
    if (M < 1 || N < 1) throw config_error("M/N: must be >= 1");
    const int offset = std::max(M - N, 0);
    std::vector<double> rates;
    for (int s = 1; s + offset < M; ++s)
        rates.push_back(M * std::log2(static_cast<double>(M) / (s + offset)));
    return rates; // descending: s = 1 gives the largest threshold
}

DiversityValue diversity_separate(int M, int N) {
    if (M < 1 || N < 1) throw config_error("M/N: must be >= 1");
    if (N < M) throw config_error("N: separate-encoding formula needs N >= M");
    return {static_cast<long>(N - M + 1), "mmse_separate", ""};
}

std::pair<DiversityValue, DiversityValue> diversity_mac_bounds(double R, int M,
                                                               int N, int K) {
    check_rate_antennas(R, M, N);
    if (K < 1) throw config_error("K: must be >= 1");
    const long w = abs_diff(N, K * M);

    const long SL = flat_step_count(R, M, N);
    DiversityValue lower{SL * SL + w * SL, "mac_per_user_lower", ""};

    double xu = static_cast<double>(K) * M * std::exp2(-R / (static_cast<double>(K) * M)) -
                static_cast<double>(std::max(M - N, 0));
    const long SU = ceil_snapped(std::max(xu, 0.0));
    DiversityValue upper{SU * SU + w * SU, "mac_per_user_upper", ""};
    return {lower, upper};
}

std::pair<DiversityValue, DiversityValue> diversity_zp_bounds(double R, int M,
                                                              int N, int nu,
                                                              int L_d) {
    check_rate_antennas(R, M, N);
    if (nu < 0) throw config_error("nu: must be >= 0");
    if (L_d < 1) throw config_error("L_d: must be >= 1");
    const long w = std::labs(static_cast<long>(nu + 1) * N - M);

    const double Q =
        std::max(0.0, M * std::exp2(-R / M) - static_cast<double>(M) * (L_d - 1));
    const long C = ceil_snapped(Q);
    DiversityValue lower{C * C + w * C, "zp_lower",
                         L_d > 1 ? "trivial for most rates when L_d > 1" : ""};

    double xu = M * std::exp2(-R / M) + 1.0 - static_cast<double>(std::max(M - N, 0));
    const long F = floor_snapped(std::max(xu, 0.0));
    DiversityValue upper{F * F + w * F, "zp_upper", ""};
    return {lower, upper};
}

DiversityValue diversity_zp_siso(int nu) {
    if (nu < 0) throw config_error("nu: must be >= 0");
    return {static_cast<long>(nu + 1), "zp_siso", "rate independent"};
}

DiversityValue diversity_cp(double R, int M, int N, int nu, int L_d) {
    check_rate_antennas(R, M, N);
    if (nu < 0) throw config_error("nu: must be >= 0");
    if (L_d < nu + 1) throw config_error("L_d: must be >= nu+1");
    const long Omega = ceil_snapped(static_cast<double>(M) * L_d * std::exp2(-R / M));
    const long u = Omega / L_d;
    const long d = Omega * (2 * u + 1) - u * L_d * (u + 1) + abs_diff(N, M) * Omega;
    DiversityValue out{d, "cp_mimo", ""};
    if (L_d > nu + 1) out.note = "upper bound for L_d > nu+1";
    if (u + 1 > M && Omega % L_d != 0)
        out.note += std::string(out.note.empty() ? "" : "; ") +
                    "allocation exceeds per-bin cap M";
    return out;
}

DiversityValue diversity_cp_simo(double R, int N, int nu, int L_d) {
    if (!(R > 0.0)) throw config_error("R: must be > 0");
    if (N < 1) throw config_error("N: must be >= 1");
    if (nu < 0) throw config_error("nu: must be >= 0");
    if (L_d < nu + 1) throw config_error("L_d: must be >= nu+1");
    const long freq = floor_snapped(std::exp2(-R) * L_d) + 1;
    const long d = N * std::min<long>(nu + 1, freq);
    return {d, "cp_simo", ""};
}

QipSolution qip_solve(long Omega, long ell, long cap) {
    if (Omega < 0) throw config_error("Omega: must be >= 0");
    if (ell < 1) throw config_error("ell: must be >= 1");
    const long u = Omega / ell;
    const long t = ell * (u + 1) - Omega;
    const long K = Omega - u * ell;
    QipSolution sol;
    sol.allocation.assign(static_cast<std::size_t>(ell), u);
    for (long j = t; j < ell; ++j) sol.allocation[static_cast<std::size_t>(j)] = u + 1;
    sol.objective = ell * u * u + 2 * u * K + K;
    if (cap >= 0) {
        long largest = sol.allocation.empty() ? 0 : sol.allocation.back();
        if (largest > cap) sol.note = "allocation exceeds cap";
    }
    return sol;
}

QipSolution qip_bruteforce(long Omega, long ell) {
    if (Omega < 0 || Omega > 12) throw config_error("Omega: enumeration bound is 0..12");
    if (ell < 1 || ell > 6) throw config_error("ell: enumeration bound is 1..6");
    QipSolution best;
    best.objective = -1;
    std::vector<long> current(static_cast<std::size_t>(ell), 0);

    auto recurse = [&](auto&& self, long slot, long remaining, long partial) -> void {
        if (slot == ell - 1) {
            current[static_cast<std::size_t>(slot)] = remaining;
            const long obj = partial + remaining * remaining;
            if (best.objective < 0 || obj < best.objective) {
                best.objective = obj;
                best.allocation = current;
            }
            return;
        }
        for (long v = 0; v <= remaining; ++v) {
            current[static_cast<std::size_t>(slot)] = v;
            self(self, slot + 1, remaining - v, partial + v * v);
        }
    };
    recurse(recurse, 0, Omega, 0);
    return best;
}

} // namespace mdl
