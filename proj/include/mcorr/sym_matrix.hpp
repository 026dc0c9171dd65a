#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mcorr/errors.hpp"

namespace mcorr {

// Symmetric matrix in packed upper-triangular storage. Symmetry is a storage
// invariant, not a runtime check: (i,j) and (j,i) are the same element, so the
// matrix cannot drift out of symmetry through rounding.
class SymMatrix {
  public:
    explicit SymMatrix(int order) : order_(order) {
        if (order <= 0) throw InvalidInput("SymMatrix: order must be positive");
        packed_.assign(static_cast<std::size_t>(order) * (order + 1) / 2, 0.0);
    }

    static SymMatrix identity(int order) {
        SymMatrix m(order);
        for (int i = 0; i < order; ++i) m.set(i, i, 1.0);
        return m;
    }

    // Symmetrizes by averaging a and a^T; asymmetry beyond sym_tol is an error.
    static SymMatrix from_dense(const Eigen::MatrixXd& a, double sym_tol = 1e-9) {
        if (a.rows() != a.cols()) throw InvalidInput("SymMatrix::from_dense: matrix not square");
        SymMatrix m(static_cast<int>(a.rows()));
        for (int i = 0; i < m.order_; ++i) {
            for (int j = i; j < m.order_; ++j) {
                const double upper = a(i, j);
                const double lower = a(j, i);
                if (std::abs(upper - lower) > sym_tol) {
                    throw InvalidInput("SymMatrix::from_dense: asymmetry exceeds tolerance");
                }
                m.set(i, j, 0.5 * (upper + lower));
            }
        }
        return m;
    }

    [[nodiscard]] int order() const noexcept { return order_; }

    [[nodiscard]] double operator()(int i, int j) const { return packed_[index(i, j)]; }

    void set(int i, int j, double value) { packed_[index(i, j)] = value; }

    [[nodiscard]] Eigen::MatrixXd dense() const {
        Eigen::MatrixXd a(order_, order_);
        for (int i = 0; i < order_; ++i) {
            for (int j = i; j < order_; ++j) {
                a(i, j) = (*this)(i, j);
                a(j, i) = (*this)(i, j);
            }
        }
        return a;
    }

    [[nodiscard]] double trace() const {
        double t = 0.0;
        for (int i = 0; i < order_; ++i) t += (*this)(i, i);
        return t;
    }

  private:
    // Row-major packed upper triangle; (i,j) with i <= j lives at
    // i*order - i(i-1)/2 + (j - i) counted from row i's diagonal element.
    [[nodiscard]] std::size_t index(int i, int j) const {
        if (i < 0 || j < 0 || i >= order_ || j >= order_) {
            throw InvalidInput("SymMatrix: index out of range");
        }
        if (i > j) std::swap(i, j);
        const auto row_start = static_cast<std::size_t>(i) * (2 * order_ - i + 1) / 2;
        return row_start + static_cast<std::size_t>(j - i);
    }

    int order_;
    std::vector<double> packed_;
};

}  // namespace mcorr
