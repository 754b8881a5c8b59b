#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>

#include "mdl/channels.hpp"
#include "mdl/rng.hpp"

namespace mdl {

/// Diagonal of (I + rho * H^H H)^{-1}, the quantity behind every linear-MMSE
/// statistic here. One Cholesky solve against the identity.
Eigen::VectorXd resolvent_diagonal(const Eigen::Ref<const Eigen::MatrixXcd>& H,
                                   double rho);

/// Per-stream MMSE output SINRs gamma_k = 1/[(I + rho H^H H)^{-1}]_kk - 1.
/// Valid for any antenna geometry; entries are clipped at 0 against
/// rounding noise.
Eigen::VectorXd mmse_sinr(const Eigen::Ref<const Eigen::MatrixXcd>& H, double rho);
Eigen::VectorXd mmse_sinr(const ChannelRealization& ch, double rho);

/// Per-stream zero-forcing SINRs gamma_k = rho / [(H^H H)^{-1}]_kk.
/// Throws rank_error when the smallest Gram eigenvalue is below
/// 1e-12 times the largest.
Eigen::VectorXd zf_sinr(const Eigen::Ref<const Eigen::MatrixXcd>& H, double rho);
Eigen::VectorXd zf_sinr(const ChannelRealization& ch, double rho);

/// (1/L_d) * sum_k log2(1 + gamma_k), bits/s/Hz. L_d = 1 for flat and mac.
double mutual_info(const Eigen::VectorXd& sinrs, int block_len);

/// Strict comparison: outage iff I < R.
bool outage_indicator(double mutual_info_bits, double R);

/// Outage of user `user` (1-based) in a stacked multiple-access channel:
/// the M streams owned by that user must jointly carry rate R.
bool mac_user_outage(const ChannelRealization& ch, double rho, double R,
                     int user, int M);

struct EigenExponents {
    Eigen::VectorXd alphas;  // -log(lambda_k)/log(rho); +inf for lambda = 0
    int count_above_one = 0;
};

/// SNR exponents of a descending eigenvalue list. Requires rho > 1.
EigenExponents eigen_exponents(const Eigen::VectorXd& eigenvalues, double rho);

/// Trace-side bounding event: sum_k 1/(1 + rho*lambda_k) >= M*2^{-R/M} - (M-N)^+.
/// Implied by outage on every realization; expects the min(M,N) top
/// eigenvalues of the Gram matrix.
bool jensen_upper_event(const Eigen::VectorXd& eigenvalues, double rho, double R,
                        int M, int N);

/// Harmonic-mean bounding event:
/// M*log2((1/M) * sum_k 1/[(I + rho W)^{-1}]_kk) < R.
/// Implies outage on every realization. M must equal the stream count of H.
bool jensen_lower_event(const Eigen::Ref<const Eigen::MatrixXcd>& H, double rho,
                        double R, int M);

/// Unit-energy QPSK constellation, Gray-ordered. Index 0 is (1+j)/sqrt(2).
const std::array<std::complex<double>, 4>& qpsk_constellation();

/// Nearest constellation index; exact ties resolve to the lowest index.
int qpsk_slice(std::complex<double> y);

/// Simulates y = sqrt(rho) * H * x + n with CN(0,1) noise, MMSE-equalizes,
/// slices every stream and returns the number of symbol errors. tx entries
/// must be constellation points.
int detect_streams(const Eigen::Ref<const Eigen::MatrixXcd>& H, double rho,
                   const Eigen::Ref<const Eigen::VectorXcd>& tx, SplitMix64& rng);

} // namespace mdl
