#pragma once

#include <string>
#include <utility>
#include <vector>

namespace mdl {

/// A closed-form diversity order together with the formula that produced it.
struct DiversityValue {
    long value = 0;
    std::string formula;
    std::string note; // empty, or a qualifier such as "upper bound"
};

/// Optimal integer allocation minimizing sum n_k^2 under sum n_k = Omega.
struct QipSolution {
    std::vector<long> allocation;
    long objective = 0;
    std::string note;
};

/// ceil/floor with a 1e-9 snap to the nearest integer first, so diversity
/// integers cannot flip on rounding noise at exact-integer arguments.
long ceil_snapped(double x);
long floor_snapped(double x);

/// Flat-fading MMSE diversity under joint spatial encoding:
/// d = S^2 + |N-M|*S with S = ceil((M*2^{-R/M} - (M-N)^+)^+).
DiversityValue diversity_flat(double R, int M, int N);

/// Companion floor-form bound, d <= floor((M*2^{-R/M} + 1 - (M-N)^+)^+)^2 + ...
/// Differs from diversity_flat only at the isolated rates where M*2^{-R/M}
/// is an integer; both are reported rather than silently picking one.
DiversityValue diversity_flat_upper_at_integer_points(double R, int M, int N);

/// The rates (descending) at which diversity_flat steps between plateaus.
std::vector<double> flat_threshold_rates(int M, int N);

/// Separate spatial encoding (and zero forcing under either encoding):
/// d = N - M + 1. Requires N >= M.
DiversityValue diversity_separate(int M, int N);

/// Per-user diversity bounds in a K-user multiple-access channel,
/// returned as (lower, upper).
std::pair<DiversityValue, DiversityValue> diversity_mac_bounds(double R, int M,
                                                               int N, int K);

/// Zero-padding diversity bounds for an M x N system with memory nu and
/// block length L_d, returned as (lower, upper). The lower bound uses
/// Q = max(0, M*2^{-R/M} - (M*L_d - M)) and is trivial for most L_d > 1.
std::pair<DiversityValue, DiversityValue> diversity_zp_bounds(double R, int M,
                                                              int N, int nu,
                                                              int L_d);

/// Single-antenna zero padding: d = nu + 1 at every rate.
DiversityValue diversity_zp_siso(int nu);

/// Cyclic-prefix diversity, exact for L_d = nu+1 and an upper bound for
/// longer blocks: d = Omega*(2u+1) - u*L_d*(u+1) + |N-M|*Omega with
/// Omega = ceil(M*L_d*2^{-R/M}) and u = floor(Omega/L_d).
DiversityValue diversity_cp(double R, int M, int N, int nu, int L_d);

/// Single transmit antenna, cyclic prefix: d = N*min(nu+1, floor(2^{-R}*L_d)+1).
DiversityValue diversity_cp_simo(double R, int N, int nu, int L_d);

/// Closed-form minimizer of sum n_k^2 subject to sum n_k = Omega, n_k >= 0
/// over ell integers: t = ell*(u+1) - Omega entries equal to u, the rest
/// u+1. If cap >= 0 and the allocation exceeds it, a warning note is set.
QipSolution qip_solve(long Omega, long ell, long cap = -1);

/// Exhaustive reference minimizer. Enumeration bound Omega <= 12, ell <= 6.
QipSolution qip_bruteforce(long Omega, long ell);

} // namespace mdl
