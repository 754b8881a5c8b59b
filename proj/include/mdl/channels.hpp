#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "mdl/rng.hpp"

namespace mdl {

enum class Scheme { flat, mac, zp, cp };
enum class Encoding { joint, separate };
enum class ReceiverKind { mmse, zf };

std::string to_string(Scheme s);
std::string to_string(Encoding e);
std::string to_string(ReceiverKind r);
Scheme scheme_from_string(const std::string& s);
Encoding encoding_from_string(const std::string& s);
ReceiverKind receiver_from_string(const std::string& s);

/// One experiment's system parameters.
///
/// M transmit antennas (per user), N receive antennas, K users (1 unless
/// scheme == mac), channel memory nu (taps - 1), data block length L_d
/// (1 unless scheme is zp/cp), target spectral efficiency R in bits/s/Hz.
/// The guard interval of the block schemes is fixed to nu symbols.
struct SystemConfig {
    int M = 1;
    int N = 1;
    int K = 1;
    int nu = 0;
    int L_d = 1;
    Scheme scheme = Scheme::flat;
    double R = 1.0;
    Encoding encoding = Encoding::joint;
    ReceiverKind receiver = ReceiverKind::mmse;
    /// For cp only: compose the transmit-side DFT into the effective channel
    /// before reading per-stream SINRs. Off by default; the bare
    /// block-circulant channel is used as-is.
    bool cp_precode = false;

    /// Throws config_error naming the offending field.
    void validate() const;

    /// Number of equalized streams: M (flat), K*M (mac), M*L_d (zp/cp).
    int streams() const;
    /// Block length used for rate normalization: L_d for zp/cp, else 1.
    int block_len() const;
};

/// A sampled effective channel plus enough metadata to rebuild it.
struct ChannelRealization {
    Eigen::MatrixXcd matrix;             // H_eff
    std::vector<Eigen::MatrixXcd> taps;  // empty unless scheme is zp/cp
    Scheme scheme = Scheme::flat;
    std::uint64_t seed = 0;
};

/// N x M matrix of i.i.d. circularly symmetric complex Gaussian entries with
/// unit per-entry variance.
ChannelRealization sample_flat(int M, int N, SplitMix64& rng);

/// Horizontal stack [H_1 H_2 ... H_K] of per-user N x M channels.
ChannelRealization stack_mac(const std::vector<Eigen::MatrixXcd>& user_channels);

/// nu+1 tap matrices (N x M each), i.i.d. Gaussian entries with per-entry
/// variance 1/(nu+1): uniform power profile, unit total energy per
/// transmit/receive antenna pair.
std::vector<Eigen::MatrixXcd> sample_isi(int M, int N, int nu, SplitMix64& rng);

/// Tall banded block-Toeplitz channel of a zero-padded block transmission,
/// size N*(L_d+nu) x M*L_d: block column j carries H_0..H_nu starting at
/// block row j.
ChannelRealization build_zp(const std::vector<Eigen::MatrixXcd>& taps, int L_d);

/// Block-circulant channel of a cyclic-prefix block transmission, size
/// N*L_d x M*L_d, generated by the block column [H_0; ...; H_nu; 0; ...; 0].
/// Requires L_d >= nu+1.
ChannelRealization build_cp(const std::vector<Eigen::MatrixXcd>& taps, int L_d);

/// Per-bin frequency response B_k = sum_i H_i exp(-j*2*pi*i*k/L_d) for
/// k = 0..L_d-1. Jointly with augmented DFT matrices these block-diagonalize
/// the cyclic-prefix channel.
std::vector<Eigen::MatrixXcd> cp_frequency_blocks(
    const std::vector<Eigen::MatrixXcd>& taps, int L_d);

struct ResamplingReport {
    bool pass = false;
    double max_err = 0.0;
};

/// Verifies that the L1-point frequency samples of a SIMO tap set are the
/// T-fold decimation of its L2-point samples (L2 = T*L1). Entrywise error
/// must stay below 1e-10.
ResamplingReport dft_resampling_check(
    const std::vector<Eigen::VectorXcd>& taps_simo, int L1, int L2);

/// Draws one realization for the configured scheme.
ChannelRealization sample_channel(const SystemConfig& cfg, SplitMix64& rng);

} // namespace mdl
