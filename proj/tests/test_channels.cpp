#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "mdl/channels.hpp"
#include "mdl/errors.hpp"
#include "mdl/numkernel.hpp"
#include "oracles.hpp"

using namespace mdl;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

TEST_CASE("sample_flat moments and determinism") {
    SplitMix64 rng(0x101);
    double acc = 0.0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i)
        acc += std::norm(sample_flat(1, 1, rng).matrix(0, 0));
    CHECK(acc / draws == doctest::Approx(1.0).epsilon(0.02));

    double frob = 0.0;
    for (int i = 0; i < draws; ++i)
        frob += sample_flat(2, 2, rng).matrix.squaredNorm();
    CHECK(frob / draws == doctest::Approx(4.0).epsilon(0.02));

    SplitMix64 a(42), b(42);
    CHECK(sample_flat(3, 2, a).matrix == sample_flat(3, 2, b).matrix);
}

TEST_CASE("stack_mac layouts") {
    SplitMix64 rng(0x102);
    const MatrixXcd H1 = sample_flat(2, 2, rng).matrix;
    CHECK(stack_mac({H1}).matrix == H1);

    const ChannelRealization two =
        stack_mac({MatrixXcd::Identity(2, 2), 2.0 * MatrixXcd::Identity(2, 2)});
    MatrixXcd expected(2, 4);
    expected << 1, 0, 2, 0, 0, 1, 0, 2;
    CHECK((two.matrix - expected).norm() == 0.0);

    std::vector<MatrixXcd> users;
    for (int u = 0; u < 3; ++u) users.push_back(sample_flat(2, 3, rng).matrix);
    const ChannelRealization st = stack_mac(users);
    for (int u = 0; u < 3; ++u)
        for (int j = 0; j < 2; ++j)
            CHECK(st.matrix.col(u * 2 + j) == users[static_cast<std::size_t>(u)].col(j));

    CHECK_THROWS_AS(stack_mac({MatrixXcd::Zero(2, 2), MatrixXcd::Zero(3, 2)}),
                    config_error);
}

TEST_CASE("sample_isi power profile and determinism") {
    SplitMix64 rng(0x103);
    const auto single = sample_isi(2, 2, 0, rng);
    CHECK(single.size() == 1);

    double energy = 0.0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        const auto taps = sample_isi(1, 1, 1, rng);
        energy += std::norm(taps[0](0, 0)) + std::norm(taps[1](0, 0));
    }
    CHECK(energy / draws == doctest::Approx(1.0).epsilon(0.02));

    SplitMix64 a(7), b(7);
    const auto ta = sample_isi(2, 1, 2, a);
    const auto tb = sample_isi(2, 1, 2, b);
    for (std::size_t i = 0; i < ta.size(); ++i) CHECK(ta[i] == tb[i]);
}

TEST_CASE("build_zp structure") {
    SplitMix64 rng(0x104);
    const auto taps0 = sample_isi(2, 3, 0, rng);
    const ChannelRealization flat_blocks = build_zp(taps0, 4);
    for (int j = 0; j < 4; ++j)
        CHECK((flat_blocks.matrix.block(3 * j, 2 * j, 3, 2) - taps0[0]).norm() == 0.0);

    std::vector<MatrixXcd> scalar_taps(2, MatrixXcd(1, 1));
    scalar_taps[0](0, 0) = std::complex<double>(0.3, -0.1);
    scalar_taps[1](0, 0) = std::complex<double>(-1.2, 0.7);
    const ChannelRealization zp = build_zp(scalar_taps, 2);
    MatrixXcd expected(3, 2);
    expected << scalar_taps[0](0, 0), 0.0, scalar_taps[1](0, 0), scalar_taps[0](0, 0),
        0.0, scalar_taps[1](0, 0);
    CHECK((zp.matrix - expected).norm() == 0.0);

    CHECK_THROWS_AS(build_zp({}, 2), config_error);
}

TEST_CASE("build_zp equals time-domain convolution") {
    SplitMix64 rng(0x105);
    for (int rep = 0; rep < 20; ++rep) {
        const int M = 1 + static_cast<int>(rng.bits(2)) % 3;
        const int N = 1 + static_cast<int>(rng.bits(2)) % 3;
        const int nu = static_cast<int>(rng.bits(2)) % 3;
        const int L_d = 1 + static_cast<int>(rng.bits(3)) % 5;
        const auto taps = sample_isi(M, N, nu, rng);
        const ChannelRealization zp = build_zp(taps, L_d);
        VectorXcd x(M * L_d);
        for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = rng.cgauss();
        const VectorXcd direct = oracle::convolve_blocks(taps, x, L_d);
        CHECK((zp.matrix * x - direct).norm() <= 1e-12 * direct.norm());
    }
}

TEST_CASE("build_cp structure and diagonalization") {
    std::vector<MatrixXcd> scalar_taps(2, MatrixXcd(1, 1));
    scalar_taps[0](0, 0) = std::complex<double>(0.5, 0.2);
    scalar_taps[1](0, 0) = std::complex<double>(-0.8, 1.1);
    const ChannelRealization cp = build_cp(scalar_taps, 3);
    MatrixXcd expected(3, 3);
    const auto h0 = scalar_taps[0](0, 0);
    const auto h1 = scalar_taps[1](0, 0);
    expected << h0, 0.0, h1, h1, h0, 0.0, 0.0, h1, h0;
    CHECK((cp.matrix - expected).norm() == 0.0);

    CHECK_THROWS_AS(build_cp(scalar_taps, 1), config_error);

    SplitMix64 rng(0x106);
    const auto taps0 = sample_isi(2, 2, 0, rng);
    const ChannelRealization cp0 = build_cp(taps0, 3);
    for (int j = 0; j < 3; ++j)
        CHECK((cp0.matrix.block(2 * j, 2 * j, 2, 2) - taps0[0]).norm() == 0.0);

    // frequency-domain reconstruction H = Q_rx^H Lambda Q_tx
    const int M = 2, N = 3, nu = 2, L_d = 4;
    const auto taps = sample_isi(M, N, nu, rng);
    const ChannelRealization cpm = build_cp(taps, L_d);
    const auto blocks = cp_frequency_blocks(taps, L_d);
    MatrixXcd Lambda = MatrixXcd::Zero(N * L_d, M * L_d);
    for (int k = 0; k < L_d; ++k)
        Lambda.block(k * N, k * M, N, M) = blocks[static_cast<std::size_t>(k)];
    const MatrixXcd recon =
        augmented_dft(L_d, N).adjoint() * Lambda * augmented_dft(L_d, M);
    CHECK((cpm.matrix - recon).norm() <= 1e-10);
}

TEST_CASE("cp_frequency_blocks special bins and eigenvalue multiset") {
    SplitMix64 rng(0x107);
    const auto taps0 = sample_isi(2, 2, 0, rng);
    for (const auto& B : cp_frequency_blocks(taps0, 3))
        CHECK((B - taps0[0]).norm() == 0.0);

    const auto taps = sample_isi(2, 2, 2, rng);
    const auto blocks = cp_frequency_blocks(taps, 4);
    MatrixXcd dc = MatrixXcd::Zero(2, 2);
    for (const auto& H : taps) dc += H;
    CHECK((blocks[0] - dc).norm() <= 1e-14);

    const ChannelRealization cp = build_cp(taps, 4);
    Eigen::VectorXd lhs = gram_eig(cp.matrix.adjoint() * cp.matrix).eigenvalues;
    std::vector<double> rhs;
    for (const auto& B : blocks) {
        const Eigen::VectorXd ev = gram_eig((B.adjoint() * B).eval()).eigenvalues;
        for (Eigen::Index k = 0; k < ev.size(); ++k) rhs.push_back(ev[k]);
    }
    std::sort(rhs.begin(), rhs.end(), std::greater<double>());
    for (Eigen::Index k = 0; k < lhs.size(); ++k)
        CHECK(std::abs(lhs[k] - rhs[static_cast<std::size_t>(k)]) <= 1e-8);
}

TEST_CASE("cp trace identity and zp diagonal blocks") {
    SplitMix64 rng(0x108);
    const int M = 2, N = 2, nu = 1, L_d = 3;
    const auto taps = sample_isi(M, N, nu, rng);

    MatrixXcd D = MatrixXcd::Zero(M, M);
    for (const auto& H : taps) D += H.adjoint() * H;

    const ChannelRealization cp = build_cp(taps, L_d);
    const double tr = (cp.matrix.adjoint() * cp.matrix).trace().real();
    CHECK(tr == doctest::Approx(L_d * D.trace().real()).epsilon(1e-9));

    const ChannelRealization zp = build_zp(taps, L_d);
    const MatrixXcd G = zp.matrix.adjoint() * zp.matrix;
    for (int j = 0; j < L_d; ++j)
        CHECK((G.block(j * M, j * M, M, M) - D).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("dft_resampling_check subset identity") {
    SplitMix64 rng(0x109);
    std::vector<VectorXcd> taps1{VectorXcd(1), VectorXcd(1)};
    taps1[0][0] = rng.cgauss();
    taps1[1][0] = rng.cgauss();
    CHECK(dft_resampling_check(taps1, 2, 2).pass); // T = 1
    CHECK(dft_resampling_check(taps1, 2, 4).pass);

    std::vector<VectorXcd> taps2(3, VectorXcd(2));
    for (auto& h : taps2)
        for (int i = 0; i < 2; ++i) h[i] = rng.cgauss();
    CHECK(dft_resampling_check(taps2, 3, 9).pass);

    CHECK_THROWS_AS(dft_resampling_check(taps1, 2, 5), config_error);
    CHECK_THROWS_AS(dft_resampling_check(taps2, 2, 4), config_error); // L1 < nu+1
}

TEST_CASE("config validation names the offending field") {
    SystemConfig cfg;
    cfg.M = 0;
    CHECK_THROWS_WITH_AS(cfg.validate(), "M: must be >= 1", config_error);

    cfg = SystemConfig{};
    cfg.scheme = Scheme::cp;
    cfg.nu = 2;
    cfg.L_d = 2;
    CHECK_THROWS_AS(cfg.validate(), config_error);

    cfg = SystemConfig{};
    cfg.R = 0.0;
    CHECK_THROWS_WITH_AS(cfg.validate(), "R: must be > 0", config_error);
}

TEST_CASE("sample_channel respects the configured scheme") {
    SystemConfig cfg;
    cfg.scheme = Scheme::cp;
    cfg.M = 2;
    cfg.N = 2;
    cfg.nu = 1;
    cfg.L_d = 3;
    cfg.R = 2.0;
    SplitMix64 rng(0x10a);
    const ChannelRealization ch = sample_channel(cfg, rng);
    CHECK(ch.matrix.rows() == 6);
    CHECK(ch.matrix.cols() == 6);
    CHECK(ch.taps.size() == 2);
    CHECK(ch.seed == 0x10a);
}
