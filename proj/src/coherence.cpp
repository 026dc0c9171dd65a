#include "mcorr/coherence.hpp"

namespace mcorr {
namespace {

CoherenceDecomposition decompose(Eigen::MatrixXd c, int p_sets, int dim, CoherenceSource source) {
    c = 0.5 * (c + c.transpose()).eval();
    CoherenceDecomposition dec;
    dec.order = p_sets * dim;
    dec.p_sets = p_sets;
    dec.dim = dim;
    dec.source = source;
    dec.eigen = sym_eig(SymMatrix::from_dense(c, 1e-6));
    dec.eigen.values = dec.eigen.values.cwiseMax(0.0);
    return dec;
}

}  // namespace

Eigen::MatrixXd coherence_from_stack(const Eigen::MatrixXd& x, int p_sets, int dim,
                                     double rel_tol) {
    if (p_sets < 2 || dim < 1) throw InvalidInput("coherence_from_stack: bad block shape");
    if (x.rows() != static_cast<Eigen::Index>(p_sets) * dim || x.cols() < 1) {
        throw InvalidInput("coherence_from_stack: stack shape mismatch");
    }
    const double m = static_cast<double>(x.cols());
    Eigen::MatrixXd r = (x * x.transpose()) / m;
    r = 0.5 * (r + r.transpose()).eval();

    // Block-diagonal normalizer: each set's own covariance becomes identity.
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(r.rows(), r.cols());
    for (int p = 0; p < p_sets; ++p) {
        const SymMatrix block = SymMatrix::from_dense(r.block(p * dim, p * dim, dim, dim), 1e-6);
        w.block(p * dim, p * dim, dim, dim) = inv_sqrt_psd(block, rel_tol).dense();
    }
    return w * r * w;
}

CoherenceDecomposition sample_coherence(const MultiDataset& data, double rel_tol, bool center) {
    if (data.p_sets < 2) throw InvalidInput("sample_coherence: need at least two data sets");
    if (static_cast<int>(data.x_blocks.size()) != data.p_sets) {
        throw InvalidInput("sample_coherence: block count mismatch");
    }
    Eigen::MatrixXd x(data.p_sets * data.dim, data.samples);
    for (int p = 0; p < data.p_sets; ++p) {
        const Eigen::MatrixXd& block = data.x_blocks[p];
        if (block.rows() != data.dim || block.cols() != data.samples) {
            throw InvalidInput("sample_coherence: block shape mismatch");
        }
        if (!block.allFinite()) throw InvalidInput("sample_coherence: non-finite data");
        x.middleRows(p * data.dim, data.dim) = block;
    }
    if (center) x.colwise() -= x.rowwise().mean();
    return decompose(coherence_from_stack(x, data.p_sets, data.dim, rel_tol), data.p_sets,
                     data.dim, CoherenceSource::sample);
}

CoherenceDecomposition population_coherence(const CorrelationProfile& profile,
                                            const std::vector<Eigen::MatrixXd>& mixing) {
    const int p_sets = profile.p_sets();
    const int n = profile.n_components();
    const Eigen::MatrixXd r_ss = composite_signal_cov(profile).r_ss.dense();

    if (mixing.empty()) return decompose(r_ss, p_sets, n, CoherenceSource::population);

    if (static_cast<int>(mixing.size()) != p_sets) {
        throw InvalidInput("population_coherence: need one mixing matrix per data set");
    }
    // F_p = (A_p A_p^T)^{-1/2} A_p is orthogonal for any full-rank A_p, which
    // is exactly why the spectrum does not depend on the mixing.
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(p_sets * n, p_sets * n);
    for (int p = 0; p < p_sets; ++p) {
        const Eigen::MatrixXd& a = mixing[p];
        if (a.rows() != n || a.cols() != n) {
            throw InvalidInput("population_coherence: mixing matrix has wrong shape");
        }
        const SymMatrix gram = SymMatrix::from_dense(a * a.transpose(), 1e-9);
        f.block(p * n, p * n, n, n) = inv_sqrt_psd(gram, 1e-12).dense() * a;
    }
    return decompose(f * r_ss * f.transpose(), p_sets, n, CoherenceSource::population);
}

EigvecPartition partition_eigvec(const CoherenceDecomposition& dec, int index) {
    if (index < 0 || index >= dec.order) throw InvalidInput("partition_eigvec: index out of range");
    EigvecPartition part;
    part.component_index = index;
    part.subvectors.reserve(dec.p_sets);
    for (int p = 0; p < dec.p_sets; ++p) {
        part.subvectors.push_back(dec.eigen.vectors.col(index).segment(p * dec.dim, dec.dim));
    }
    return part;
}

}  // namespace mcorr
