#include "mdl/numkernel.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "mdl/errors.hpp"

namespace mdl {

namespace {

Eigen::VectorXd descending_eigenvalues(const Eigen::Ref<const Eigen::MatrixXcd>& A,
                                       Eigen::MatrixXcd* vectors) {
    Eigen::MatrixXcd sym = 0.5 * (A + A.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver;
    solver.compute(sym, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw numeric_error("hermitian_eig: eigensolver did not converge");
    Eigen::VectorXd vals = solver.eigenvalues().reverse();
    if (vectors) *vectors = solver.eigenvectors().rowwise().reverse();
    return vals;
}

void check_hermitian(const Eigen::Ref<const Eigen::MatrixXcd>& A) {
    if (A.rows() != A.cols())
        throw config_error("hermitian_eig: matrix is not square");
    const double scale = A.norm();
    if ((A - A.adjoint()).norm() > 1e-12 * scale)
        throw config_error("hermitian_eig: matrix is not Hermitian within tolerance");
}

} // namespace

EigenSystem hermitian_eig(const Eigen::Ref<const Eigen::MatrixXcd>& A) {
    check_hermitian(A);
    EigenSystem out;
    out.eigenvalues = descending_eigenvalues(A, &out.eigenvectors);
    return out;
}

EigenSystem gram_eig(const Eigen::Ref<const Eigen::MatrixXcd>& G) {
    EigenSystem out = hermitian_eig(G);
    for (Eigen::Index k = 0; k < out.eigenvalues.size(); ++k)
        if (out.eigenvalues[k] < 0.0 && out.eigenvalues[k] >= -1e-12)
            out.eigenvalues[k] = 0.0;
    return out;
}

Eigen::MatrixXcd dft_matrix(Eigen::Index L) {
    if (L < 1) throw config_error("dft_matrix: L must be >= 1");
    Eigen::MatrixXcd Q(L, L);
    const double scale = 1.0 / std::sqrt(static_cast<double>(L));
    const double step = -2.0 * std::numbers::pi / static_cast<double>(L);
    for (Eigen::Index p = 0; p < L; ++p)
        for (Eigen::Index q = 0; q < L; ++q) {
            // p*q reduced mod L keeps the phase argument small
            const double phase = step * static_cast<double>((p * q) % L);
            Q(p, q) = scale * std::complex<double>(std::cos(phase), std::sin(phase));
        }
    return Q;
}

Eigen::MatrixXcd augmented_dft(Eigen::Index L, Eigen::Index S) {
    if (L < 1 || S < 1) throw config_error("augmented_dft: L and S must be >= 1");
    const Eigen::MatrixXcd Q = dft_matrix(L);
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(L * S, L * S);
    for (Eigen::Index p = 0; p < L; ++p)
        for (Eigen::Index q = 0; q < L; ++q)
            out.block(p * S, q * S, S, S).diagonal().setConstant(Q(p, q));
    return out;
}

bool interlaces(const Eigen::VectorXd& outer, const Eigen::VectorXd& inner,
                double slack) {
    if (outer.size() != inner.size() + 1) return false;
    for (Eigen::Index k = 0; k < inner.size(); ++k) {
        if (outer[k + 1] > inner[k] + slack) return false;
        if (inner[k] > outer[k] + slack) return false;
    }
    return true;
}

SturmianReport sturmian_check(const Eigen::Ref<const Eigen::MatrixXcd>& A,
                              int steps, double slack) {
    check_hermitian(A);
    const int n = static_cast<int>(A.rows());
    if (steps < 1 || steps >= n)
        throw config_error("sturmian_check: steps must satisfy 1 <= steps < dim");

    std::vector<Eigen::VectorXd> spectra;
    spectra.reserve(static_cast<std::size_t>(steps) + 1);
    for (int s = n - steps; s <= n; ++s)
        spectra.push_back(descending_eigenvalues(A.topLeftCorner(s, s), nullptr));

    SturmianReport report;
    for (std::size_t i = 0; i + 1 < spectra.size(); ++i) {
        const Eigen::VectorXd& inner = spectra[i];
        const Eigen::VectorXd& outer = spectra[i + 1];
        for (Eigen::Index k = 0; k < inner.size(); ++k) {
            const bool left_ok = outer[k + 1] <= inner[k] + slack;
            const bool right_ok = inner[k] <= outer[k] + slack;
            if (left_ok && right_ok) continue;
            report.pass = false;
            report.size_at_fail = static_cast<int>(outer.size());
            report.index_at_fail = static_cast<int>(k) + 1;
            std::ostringstream oss;
            oss << "interlacing fails at submatrix size " << outer.size()
                << ", eigenvalue " << (k + 1) << ": inner=" << inner[k]
                << " outer=" << outer[k] << "/" << outer[k + 1];
            report.detail = oss.str();
            return report;
        }
    }
    return report;
}

} // namespace mdl
