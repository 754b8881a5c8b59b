#include "mdl/receivers.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <limits>

#include "mdl/errors.hpp"
#include "mdl/numkernel.hpp"

namespace mdl {

Eigen::VectorXd resolvent_diagonal(const Eigen::Ref<const Eigen::MatrixXcd>& H,
                                   double rho) {
    if (!(rho > 0.0)) throw config_error("rho: must be > 0");
    const Eigen::Index n = H.cols();
    Eigen::MatrixXcd A = rho * (H.adjoint() * H);
    A.diagonal().array() += 1.0;
    Eigen::LLT<Eigen::MatrixXcd> llt(A);
    if (llt.info() != Eigen::Success)
        throw numeric_error("resolvent_diagonal: Cholesky factorization failed");
    const Eigen::MatrixXcd inv = llt.solve(Eigen::MatrixXcd::Identity(n, n));
    return inv.diagonal().real();
}

Eigen::VectorXd mmse_sinr(const Eigen::Ref<const Eigen::MatrixXcd>& H, double rho) {
    const Eigen::VectorXd d = resolvent_diagonal(H, rho);
    Eigen::VectorXd gamma(d.size());
    for (Eigen::Index k = 0; k < d.size(); ++k)
        gamma[k] = std::max(1.0 / d[k] - 1.0, 0.0);
    return gamma;
}

Eigen::VectorXd mmse_sinr(const ChannelRealization& ch, double rho) {
    return mmse_sinr(ch.matrix, rho);
}

Eigen::VectorXd zf_sinr(const Eigen::Ref<const Eigen::MatrixXcd>& H, double rho) {
    if (!(rho > 0.0)) throw config_error("rho: must be > 0");
    const EigenSystem es = gram_eig(H.adjoint() * H);
    const Eigen::VectorXd& lambda = es.eigenvalues;
    const Eigen::Index n = lambda.size();
    if (n == 0 || lambda[0] <= 0.0 || lambda[n - 1] < 1e-12 * lambda[0])
        throw rank_error("zf_sinr: channel is rank deficient");
    Eigen::VectorXd gamma(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        double inv_kk = 0.0; // [(H^H H)^{-1}]_kk through the eigensystem
        for (Eigen::Index l = 0; l < n; ++l)
            inv_kk += std::norm(es.eigenvectors(k, l)) / lambda[l];
        gamma[k] = rho / inv_kk;
    }
    return gamma;
}

Eigen::VectorXd zf_sinr(const ChannelRealization& ch, double rho) {
    return zf_sinr(ch.matrix, rho);
}

double mutual_info(const Eigen::VectorXd& sinrs, int block_len) {
    if (block_len < 1) throw config_error("block_len: must be >= 1");
    double bits = 0.0;
    for (Eigen::Index k = 0; k < sinrs.size(); ++k)
        bits += std::log2(1.0 + sinrs[k]);
    return bits / static_cast<double>(block_len);
}

bool outage_indicator(double mutual_info_bits, double R) {
    return mutual_info_bits < R;
}

bool mac_user_outage(const ChannelRealization& ch, double rho, double R,
                     int user, int M) {
    const int users = static_cast<int>(ch.matrix.cols()) / M;
    if (user < 1 || user > users)
        throw config_error("user: index out of range");
    const Eigen::VectorXd gamma = mmse_sinr(ch.matrix, rho);
    double bits = 0.0;
    for (int k = (user - 1) * M; k < user * M; ++k)
        bits += std::log2(1.0 + gamma[k]);
    return bits < R;
}

EigenExponents eigen_exponents(const Eigen::VectorXd& eigenvalues, double rho) {
    if (!(rho > 1.0)) throw config_error("rho: eigen exponents need rho > 1");
    const double log_rho = std::log(rho);
    EigenExponents out;
    out.alphas.resize(eigenvalues.size());
    for (Eigen::Index k = 0; k < eigenvalues.size(); ++k) {
        const double lambda = eigenvalues[k];
        if (lambda <= 0.0)
            out.alphas[k] = std::numeric_limits<double>::infinity();
        else
            out.alphas[k] = -std::log(lambda) / log_rho;
        if (out.alphas[k] > 1.0) ++out.count_above_one;
    }
    return out;
}

bool jensen_upper_event(const Eigen::VectorXd& eigenvalues, double rho, double R,
                        int M, int N) {
    if (eigenvalues.size() != std::min(M, N))
        throw config_error("eigenvalues: expected min(M,N) entries");
    double lhs = 0.0;
    for (Eigen::Index k = 0; k < eigenvalues.size(); ++k)
        lhs += 1.0 / (1.0 + rho * eigenvalues[k]);
    const double rhs =
        M * std::exp2(-R / M) - static_cast<double>(std::max(M - N, 0));
    return lhs >= rhs;
}

bool jensen_lower_event(const Eigen::Ref<const Eigen::MatrixXcd>& H, double rho,
                        double R, int M) {
    const Eigen::VectorXd d = resolvent_diagonal(H, rho);
    if (d.size() != M)
        throw config_error("M: must equal the stream count of the channel");
    double acc = 0.0;
    for (Eigen::Index k = 0; k < d.size(); ++k) acc += 1.0 / d[k];
    return M * std::log2(acc / M) < R;
}

const std::array<std::complex<double>, 4>& qpsk_constellation() {
    static const double a = 1.0 / std::sqrt(2.0);
    static const std::array<std::complex<double>, 4> points = {
        std::complex<double>(a, a), std::complex<double>(-a, a),
        std::complex<double>(-a, -a), std::complex<double>(a, -a)};
    return points;
}

int qpsk_slice(std::complex<double> y) {
    const auto& points = qpsk_constellation();
    int best = 0;
    double best_d = std::norm(y - points[0]);
    for (int i = 1; i < 4; ++i) {
        const double d = std::norm(y - points[static_cast<std::size_t>(i)]);
        if (d < best_d) { // strict: ties keep the lowest index
            best_d = d;
            best = i;
        }
    }
    return best;
}

int detect_streams(const Eigen::Ref<const Eigen::MatrixXcd>& H, double rho,
                   const Eigen::Ref<const Eigen::VectorXcd>& tx, SplitMix64& rng) {
    if (!(rho > 0.0)) throw config_error("rho: must be > 0");
    if (tx.size() != H.cols())
        throw config_error("tx: symbol count must match channel columns");
    const Eigen::Index N = H.rows();
    const Eigen::Index M = H.cols();

    Eigen::VectorXcd noise(N);
    for (Eigen::Index i = 0; i < N; ++i) noise[i] = rng.cgauss();
    // y / sqrt(rho): the unit-power signal model with noise variance 1/rho
    const Eigen::VectorXcd y = H * tx + noise / std::sqrt(rho);

    Eigen::MatrixXcd A = H.adjoint() * H;
    A.diagonal().array() += 1.0 / rho;
    Eigen::LLT<Eigen::MatrixXcd> llt(A);
    if (llt.info() != Eigen::Success)
        throw numeric_error("detect_streams: Cholesky factorization failed");
    const Eigen::VectorXcd xhat = llt.solve(H.adjoint() * y);

    int errors = 0;
    for (Eigen::Index k = 0; k < M; ++k)
        if (qpsk_slice(xhat[k]) != qpsk_slice(tx[k])) ++errors;
    return errors;
}

} // namespace mdl
