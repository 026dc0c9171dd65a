#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mcorr/numerics.hpp"
#include "mcorr/profile.hpp"
#include "mcorr/synth.hpp"

namespace mcorr {

enum class CoherenceSource { sample, population };

// Eigendecomposition of a composite coherence matrix: the stacked covariance
// with every data set's own covariance normalized to identity. Its diagonal
// blocks are identity, so the trace is nP; eigenvalues are clamped at zero
// (a PSD matrix can only dip below through rounding).
struct CoherenceDecomposition {
    int order = 0;   // nP
    int p_sets = 0;  // P
    int dim = 0;     // n
    CoherenceSource source = CoherenceSource::sample;
    EigenPairs eigen;
};

// One eigenvector split into its P per-data-set slices of length n.
struct EigvecPartition {
    std::vector<Eigen::VectorXd> subvectors;
    int component_index = 0;  // which eigenvector (0-based rank)
};

// Coherence matrix of a stacked data matrix (nP x M): (1/M) XX^T normalized
// by the inverse square roots of its P diagonal blocks.
// Throws SingularMatrix when a per-set covariance is not PD at rel_tol.
Eigen::MatrixXd coherence_from_stack(const Eigen::MatrixXd& x, int p_sets, int dim,
                                     double rel_tol = 1e-10);

// center subtracts per-row means first; default off (the model is zero-mean,
// and the 1/M normalization is kept either way).
CoherenceDecomposition sample_coherence(const MultiDataset& data, double rel_tol = 1e-10,
                                        bool center = false);

// Noise-free population coherence. Empty mixing means identity, in which case
// the matrix is exactly the profile's composite signal covariance; any
// full-rank mixing leaves the spectrum unchanged.
CoherenceDecomposition population_coherence(const CorrelationProfile& profile,
                                            const std::vector<Eigen::MatrixXd>& mixing = {});

EigvecPartition partition_eigvec(const CoherenceDecomposition& dec, int index);

}  // namespace mcorr
