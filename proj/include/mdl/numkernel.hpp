#pragma once

#include <Eigen/Dense>
#include <string>

namespace mdl {

/// Hermitian eigendecomposition A = U diag(lambda) U^H with eigenvalues
/// sorted descending and eigenvectors as matching unitary columns.
struct EigenSystem {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXcd eigenvectors;
};

/// Decomposes a Hermitian matrix. Throws config_error if the input is not
/// square or departs from Hermitian symmetry by more than 1e-12 relative
/// Frobenius norm; throws numeric_error if the solver fails to converge.
EigenSystem hermitian_eig(const Eigen::Ref<const Eigen::MatrixXcd>& A);

/// hermitian_eig for Gram matrices: eigenvalues in [-1e-12, 0) are clipped
/// to zero so downstream 1/(1+rho*lambda) terms never see sign noise.
EigenSystem gram_eig(const Eigen::Ref<const Eigen::MatrixXcd>& G);

/// Unitary L-point DFT matrix, entry (p,q) = exp(-j*2*pi*p*q/L)/sqrt(L).
Eigen::MatrixXcd dft_matrix(Eigen::Index L);

/// Block DFT acting on S-vector-valued sequences: dft_matrix(L) kron I_S.
Eigen::MatrixXcd augmented_dft(Eigen::Index L, Eigen::Index S);

/// True when two descending eigenvalue lists of sizes n+1 (outer) and n
/// (inner) interlace: outer[k+1] <= inner[k] <= outer[k], within slack.
bool interlaces(const Eigen::VectorXd& outer, const Eigen::VectorXd& inner,
                double slack);

struct SturmianReport {
    bool pass = true;
    int size_at_fail = 0;  // dimension of the larger matrix in the bad pair
    int index_at_fail = 0; // 1-based eigenvalue index of the first violation
    std::string detail;
};

/// Checks eigenvalue interlacing along the chain of leading principal
/// submatrices of sizes dim-steps .. dim. Requires 1 <= steps < dim.
SturmianReport sturmian_check(const Eigen::Ref<const Eigen::MatrixXcd>& A,
                              int steps, double slack = 1e-9);

} // namespace mdl
