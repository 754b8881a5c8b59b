// Independent reference computations used only by tests. These deliberately
// avoid the library's own code paths for the quantities they check.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "mdl/rng.hpp"

namespace oracle {

/// Roots of the characteristic polynomial of a 3x3 Hermitian matrix,
/// descending. Coefficients from trace/minors/determinant, roots by the
/// trigonometric solution of the real cubic.
inline Eigen::Vector3d charpoly_roots(const Eigen::Matrix3cd& A) {
    const double tr = A.trace().real();
    const double tr2 = (A * A).trace().real();
    const double m2 = 0.5 * (tr * tr - tr2);
    const double det = A.determinant().real();

    // x^3 + a x^2 + b x + c with a = -tr, b = m2, c = -det
    const double a = -tr, b = m2, c = -det;
    const double p = b - a * a / 3.0;
    const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;

    Eigen::Vector3d roots;
    if (p >= -1e-300) { // triple root up to rounding
        roots.setConstant(-a / 3.0);
        return roots;
    }
    const double r = 2.0 * std::sqrt(-p / 3.0);
    double arg = 3.0 * q / (p * r);
    arg = std::clamp(arg, -1.0, 1.0);
    const double phi = std::acos(arg);
    for (int k = 0; k < 3; ++k)
        roots[k] = r * std::cos((phi - 2.0 * std::numbers::pi * k) / 3.0) - a / 3.0;
    std::sort(roots.data(), roots.data() + 3, std::greater<double>());
    return roots;
}

/// Time-domain block convolution of a zero-padded block sequence with a tap
/// list: y_t = sum_i taps[i] * x_{t-i}, x zero outside 0..L_d-1.
inline Eigen::VectorXcd convolve_blocks(const std::vector<Eigen::MatrixXcd>& taps,
                                        const Eigen::VectorXcd& x, int L_d) {
    const int N = static_cast<int>(taps.front().rows());
    const int M = static_cast<int>(taps.front().cols());
    const int nu = static_cast<int>(taps.size()) - 1;
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(N) * (L_d + nu));
    for (int t = 0; t < L_d + nu; ++t)
        for (int i = 0; i <= nu; ++i) {
            const int j = t - i;
            if (j < 0 || j >= L_d) continue;
            y.segment(t * N, N) += taps[static_cast<std::size_t>(i)] * x.segment(j * M, M);
        }
    return y;
}

/// P(log2(1 + rho*|h|^2) < R) for |h|^2 ~ Exp(1).
inline double rayleigh_outage(double R, double rho) {
    return 1.0 - std::exp(-(std::exp2(R) - 1.0) / rho);
}

inline double q_func(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

/// Average QPSK symbol error rate over Rayleigh fading at mean symbol SNR
/// rho: E[2Q(sqrt(g)) - Q^2(sqrt(g))] with g ~ Exp(mean rho), by Simpson
/// quadrature on the substitution g = rho*t.
inline double rayleigh_qpsk_ser(double rho) {
    auto integrand = [rho](double t) {
        const double qq = q_func(std::sqrt(rho * t));
        return (2.0 * qq - qq * qq) * std::exp(-t);
    };
    const int n = 20000; // even
    const double hi = 60.0;
    const double h = hi / n;
    double acc = integrand(0.0) + integrand(hi);
    for (int i = 1; i < n; ++i) acc += integrand(i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

/// Haar-ish random unitary from the QR of a complex Gaussian matrix.
inline Eigen::MatrixXcd random_unitary(int n, mdl::SplitMix64& rng) {
    Eigen::MatrixXcd A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = rng.cgauss();
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(A);
    return qr.householderQ();
}

inline Eigen::MatrixXcd random_gaussian(int rows, int cols, mdl::SplitMix64& rng) {
    Eigen::MatrixXcd A(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) A(i, j) = rng.cgauss();
    return A;
}

} // namespace oracle
