#include "mdl/channels.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "mdl/errors.hpp"

namespace mdl {

std::string to_string(Scheme s) {
    switch (s) {
        case Scheme::flat: return "flat";
        case Scheme::mac: return "mac";
        case Scheme::zp: return "zp";
        case Scheme::cp: return "cp";
    }
    return "?";
}

std::string to_string(Encoding e) {
    return e == Encoding::joint ? "joint" : "separate";
}

std::string to_string(ReceiverKind r) {
    return r == ReceiverKind::mmse ? "mmse" : "zf";
}

Scheme scheme_from_string(const std::string& s) {
    if (s == "flat") return Scheme::flat;
    if (s == "mac") return Scheme::mac;
    if (s == "zp") return Scheme::zp;
    if (s == "cp") return Scheme::cp;
    throw config_error("scheme: expected one of flat|mac|zp|cp, got '" + s + "'");
}

Encoding encoding_from_string(const std::string& s) {
    if (s == "joint") return Encoding::joint;
    if (s == "separate") return Encoding::separate;
    throw config_error("encoding: expected joint|separate, got '" + s + "'");
}

ReceiverKind receiver_from_string(const std::string& s) {
    if (s == "mmse") return ReceiverKind::mmse;
    if (s == "zf") return ReceiverKind::zf;
    throw config_error("receiver: expected mmse|zf, got '" + s + "'");
}

void SystemConfig::validate() const {
    if (M < 1) throw config_error("M: must be >= 1");
    if (N < 1) throw config_error("N: must be >= 1");
    if (K < 1) throw config_error("K: must be >= 1");
    if (nu < 0) throw config_error("nu: must be >= 0");
    if (L_d < 1) throw config_error("L_d: must be >= 1");
    if (!(R > 0.0)) throw config_error("R: must be > 0");
    if (scheme == Scheme::mac && K < 1) throw config_error("K: mac needs K >= 1");
    if (scheme != Scheme::mac && K != 1)
        throw config_error("K: only the mac scheme supports K > 1");
    if ((scheme == Scheme::zp || scheme == Scheme::cp) && L_d < nu + 1)
        throw config_error("L_d: block schemes need L_d >= nu+1");
    if (scheme != Scheme::zp && scheme != Scheme::cp) {
        if (L_d != 1) throw config_error("L_d: only zp/cp schemes use L_d > 1");
        if (nu != 0) throw config_error("nu: only zp/cp schemes use nu > 0");
    }
    if (encoding == Encoding::separate && scheme != Scheme::flat)
        throw config_error("encoding: separate encoding is defined for the flat scheme");
    if (cp_precode && scheme != Scheme::cp)
        throw config_error("cp_precode: only valid for the cp scheme");
}

int SystemConfig::streams() const {
    switch (scheme) {
        case Scheme::flat: return M;
        case Scheme::mac: return K * M;
        case Scheme::zp:
        case Scheme::cp: return M * L_d;
    }
    return M;
}

int SystemConfig::block_len() const {
    return (scheme == Scheme::zp || scheme == Scheme::cp) ? L_d : 1;
}

ChannelRealization sample_flat(int M, int N, SplitMix64& rng) {
    if (M < 1 || N < 1) throw config_error("sample_flat: M and N must be >= 1");
    ChannelRealization ch;
    ch.scheme = Scheme::flat;
    ch.seed = rng.seed();
    ch.matrix.resize(N, M);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < M; ++j) ch.matrix(i, j) = rng.cgauss();
    return ch;
}

ChannelRealization stack_mac(const std::vector<Eigen::MatrixXcd>& user_channels) {
    if (user_channels.empty()) throw config_error("stack_mac: no user channels");
    const Eigen::Index N = user_channels.front().rows();
    const Eigen::Index M = user_channels.front().cols();
    for (const auto& H : user_channels)
        if (H.rows() != N || H.cols() != M)
            throw config_error("stack_mac: user channel dimensions differ");
    ChannelRealization ch;
    ch.scheme = Scheme::mac;
    ch.matrix.resize(N, M * static_cast<Eigen::Index>(user_channels.size()));
    for (std::size_t u = 0; u < user_channels.size(); ++u)
        ch.matrix.middleCols(static_cast<Eigen::Index>(u) * M, M) = user_channels[u];
    return ch;
}

std::vector<Eigen::MatrixXcd> sample_isi(int M, int N, int nu, SplitMix64& rng) {
    if (M < 1 || N < 1) throw config_error("sample_isi: M and N must be >= 1");
    if (nu < 0) throw config_error("sample_isi: nu must be >= 0");
    const double scale = 1.0 / std::sqrt(static_cast<double>(nu + 1));
    std::vector<Eigen::MatrixXcd> taps(static_cast<std::size_t>(nu) + 1);
    for (auto& H : taps) {
        H.resize(N, M);
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < M; ++j) H(i, j) = scale * rng.cgauss();
    }
    return taps;
}

ChannelRealization build_zp(const std::vector<Eigen::MatrixXcd>& taps, int L_d) {
    if (taps.empty()) throw config_error("build_zp: empty tap list");
    if (L_d < 1) throw config_error("build_zp: L_d must be >= 1");
    const int nu = static_cast<int>(taps.size()) - 1;
    const Eigen::Index N = taps.front().rows();
    const Eigen::Index M = taps.front().cols();
    ChannelRealization ch;
    ch.scheme = Scheme::zp;
    ch.taps = taps;
    ch.matrix = Eigen::MatrixXcd::Zero(N * (L_d + nu), M * L_d);
    for (int j = 0; j < L_d; ++j)
        for (int i = 0; i <= nu; ++i)
            ch.matrix.block((j + i) * N, j * M, N, M) = taps[static_cast<std::size_t>(i)];
    return ch;
}

ChannelRealization build_cp(const std::vector<Eigen::MatrixXcd>& taps, int L_d) {
    if (taps.empty()) throw config_error("build_cp: empty tap list");
    const int nu = static_cast<int>(taps.size()) - 1;
    if (L_d < nu + 1)
        throw config_error("build_cp: L_d must be >= nu+1 (prefix shorter than memory)");
    const Eigen::Index N = taps.front().rows();
    const Eigen::Index M = taps.front().cols();
    ChannelRealization ch;
    ch.scheme = Scheme::cp;
    ch.taps = taps;
    ch.matrix = Eigen::MatrixXcd::Zero(N * L_d, M * L_d);
    for (int r = 0; r < L_d; ++r)
        for (int c = 0; c < L_d; ++c) {
            const int d = (r - c + L_d) % L_d;
            if (d <= nu)
                ch.matrix.block(r * N, c * M, N, M) = taps[static_cast<std::size_t>(d)];
        }
    return ch;
}

std::vector<Eigen::MatrixXcd> cp_frequency_blocks(
    const std::vector<Eigen::MatrixXcd>& taps, int L_d) {
    if (taps.empty()) throw config_error("cp_frequency_blocks: empty tap list");
    if (L_d < 1) throw config_error("cp_frequency_blocks: L_d must be >= 1");
    const Eigen::Index N = taps.front().rows();
    const Eigen::Index M = taps.front().cols();
    std::vector<Eigen::MatrixXcd> blocks(static_cast<std::size_t>(L_d));
    for (int k = 0; k < L_d; ++k) {
        Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(N, M);
        for (std::size_t i = 0; i < taps.size(); ++i) {
            const double phase = -2.0 * std::numbers::pi *
                                 static_cast<double>(i) * static_cast<double>(k) /
                                 static_cast<double>(L_d);
            B += taps[i] * std::complex<double>(std::cos(phase), std::sin(phase));
        }
        blocks[static_cast<std::size_t>(k)] = std::move(B);
    }
    return blocks;
}

ResamplingReport dft_resampling_check(
    const std::vector<Eigen::VectorXcd>& taps_simo, int L1, int L2) {
    if (taps_simo.empty()) throw config_error("dft_resampling_check: empty tap list");
    if (L1 < 1 || L2 < L1 || L2 % L1 != 0)
        throw config_error("dft_resampling_check: need L2 = T*L1 with integer T >= 1");
    const int nu = static_cast<int>(taps_simo.size()) - 1;
    if (L1 < nu + 1)
        throw config_error("dft_resampling_check: need L1 >= nu+1");
    const int T = L2 / L1;

    auto bins = [&taps_simo](int L) {
        std::vector<Eigen::VectorXcd> b(static_cast<std::size_t>(L));
        for (int q = 0; q < L; ++q) {
            Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(taps_simo.front().size());
            for (std::size_t n = 0; n < taps_simo.size(); ++n) {
                const double phase = -2.0 * std::numbers::pi *
                                     static_cast<double>(n) * static_cast<double>(q) /
                                     static_cast<double>(L);
                acc += taps_simo[n] * std::complex<double>(std::cos(phase), std::sin(phase));
            }
            b[static_cast<std::size_t>(q)] = std::move(acc);
        }
        return b;
    };

    const auto coarse = bins(L1);
    const auto fine = bins(L2);
    ResamplingReport report;
    for (int q = 0; q < L1; ++q) {
        const double err =
            (coarse[static_cast<std::size_t>(q)] - fine[static_cast<std::size_t>(q * T)])
                .cwiseAbs()
                .maxCoeff();
        report.max_err = std::max(report.max_err, err);
    }
    report.pass = report.max_err <= 1e-10;
    return report;
}

ChannelRealization sample_channel(const SystemConfig& cfg, SplitMix64& rng) {
    switch (cfg.scheme) {
        case Scheme::flat: return sample_flat(cfg.M, cfg.N, rng);
        case Scheme::mac: {
            std::vector<Eigen::MatrixXcd> users(static_cast<std::size_t>(cfg.K));
            for (auto& H : users) H = sample_flat(cfg.M, cfg.N, rng).matrix;
            ChannelRealization ch = stack_mac(users);
            ch.seed = rng.seed();
            return ch;
        }
        case Scheme::zp: {
            ChannelRealization ch = build_zp(sample_isi(cfg.M, cfg.N, cfg.nu, rng), cfg.L_d);
            ch.seed = rng.seed();
            return ch;
        }
        case Scheme::cp: {
            ChannelRealization ch = build_cp(sample_isi(cfg.M, cfg.N, cfg.nu, rng), cfg.L_d);
            ch.seed = rng.seed();
            return ch;
        }
    }
    throw config_error("scheme: unknown value");
}

} // namespace mdl
