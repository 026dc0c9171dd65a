#include "mcorr/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "mcorr/errors.hpp"

namespace mcorr {
namespace {

// Eigen returns ascending eigenvalues; flip to descending once, here.
EigenPairs decompose_descending(const Eigen::MatrixXd& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
    if (solver.info() != Eigen::Success) {
        throw SingularMatrix("sym_eig: eigensolver did not converge");
    }
    const int n = static_cast<int>(a.rows());
    EigenPairs out;
    out.values = solver.eigenvalues().reverse();
    out.vectors.resize(n, n);
    for (int k = 0; k < n; ++k) out.vectors.col(k) = solver.eigenvectors().col(n - 1 - k);
    return out;
}

}  // namespace

EigenPairs sym_eig(const SymMatrix& a) { return decompose_descending(a.dense()); }

SymMatrix inv_sqrt_psd(const SymMatrix& a, double rel_tol) {
    const EigenPairs eig = decompose_descending(a.dense());
    const double largest = eig.values(0);
    const double smallest = eig.values(eig.values.size() - 1);
    if (largest <= 0.0) {
        throw SingularMatrix("inv_sqrt_psd: matrix has no positive eigenvalue");
    }
    if (smallest < -rel_tol * largest) {
        throw NotPSD("inv_sqrt_psd: negative eigenvalue beyond tolerance");
    }
    if (smallest <= rel_tol * largest) {
        throw SingularMatrix("inv_sqrt_psd: condition number exceeds 1/rel_tol");
    }
    const Eigen::VectorXd scale = eig.values.array().sqrt().inverse();
    return SymMatrix::from_dense(
        eig.vectors * scale.asDiagonal() * eig.vectors.transpose(), 1e-9);
}

SymMatrix sqrt_psd(const SymMatrix& a, double tol) {
    const EigenPairs eig = decompose_descending(a.dense());
    const double largest = std::max(eig.values(0), 0.0);
    Eigen::VectorXd clamped = eig.values;
    for (Eigen::Index i = 0; i < clamped.size(); ++i) {
        if (clamped(i) < -tol * std::max(largest, 1.0)) {
            throw NotPSD("sqrt_psd: negative eigenvalue beyond tolerance");
        }
        clamped(i) = std::max(clamped(i), 0.0);
    }
    const Eigen::VectorXd scale = clamped.array().sqrt();
    return SymMatrix::from_dense(
        eig.vectors * scale.asDiagonal() * eig.vectors.transpose(), 1e-9);
}

Eigen::MatrixXd random_orthogonal(int order, RngStream& rng) {
    if (order <= 0) throw InvalidInput("random_orthogonal: order must be positive");
    Eigen::MatrixXd g(order, order);
    for (int j = 0; j < order; ++j) {
        for (int i = 0; i < order; ++i) g(i, j) = rng.next_gaussian();
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fixing the sign of each R diagonal entry makes the factorization unique,
    // which is what turns "QR of a Gaussian" into the Haar distribution.
    for (int j = 0; j < order; ++j) {
        if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    }
    return q;
}

Eigen::MatrixXd sample_gaussian(const SymMatrix& cov, int m, RngStream& rng) {
    if (m <= 0) throw InvalidInput("sample_gaussian: sample count must be positive");
    const int n = cov.order();
    const Eigen::MatrixXd root = sqrt_psd(cov).dense();
    Eigen::MatrixXd g(n, m);
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < n; ++i) g(i, j) = rng.next_gaussian();
    }
    return root * g;
}

}  // namespace mcorr
