#pragma once

#include <Eigen/Dense>

#include "mcorr/rng.hpp"
#include "mcorr/sym_matrix.hpp"

namespace mcorr {

// Full symmetric eigendecomposition, eigenvalues sorted descending and
// vectors.col(k) paired with values[k].
struct EigenPairs {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
};

// All routines here are the single seam to the dense linear-algebra backend;
// nothing outside this header includes the solver directly.

EigenPairs sym_eig(const SymMatrix& a);

// a^(-1/2) for symmetric positive definite a.
// Throws NotPSD when an eigenvalue is negative beyond noise, SingularMatrix
// when the smallest eigenvalue is <= rel_tol * largest.
SymMatrix inv_sqrt_psd(const SymMatrix& a, double rel_tol = 1e-10);

// a^(1/2) for symmetric positive semidefinite a; eigenvalues within
// -tol * largest of zero are clamped to zero, anything lower throws NotPSD.
SymMatrix sqrt_psd(const SymMatrix& a, double tol = 1e-10);

// Haar-distributed orthogonal matrix: QR of an iid Gaussian matrix with the
// sign of each R diagonal entry folded into Q.
Eigen::MatrixXd random_orthogonal(int order, RngStream& rng);

// m samples from N(0, cov), one sample per column (order x m).
Eigen::MatrixXd sample_gaussian(const SymMatrix& cov, int m, RngStream& rng);

}  // namespace mcorr
