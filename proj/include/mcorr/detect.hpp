#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mcorr/pair_map.hpp"
#include "mcorr/rng.hpp"
#include "mcorr/synth.hpp"

namespace mcorr {

struct DetectConfig {
    int bootstraps = 1000;
    double pfa = 0.05;
    std::uint64_t seed = 0;
    double eig_tol = 1e-6;        // near-degeneracy diagnostic threshold
    double cov_rel_tol = 1e-10;   // PD floor for per-set sample covariances
    bool share_bootstrap = true;  // structure stage reuses the dimension stage's resamples
};

struct DetectionReport {
    int d_hat = 0;
    std::vector<double> pvalues_dim;  // one per tested rank s = 0..n-1
    CorrelationMap map;               // d_hat rows
    Eigen::MatrixXd pvalues_struct;   // d_hat x P
    std::vector<std::string> diagnostics;
};

// One shared set of resampled spectra: everything both test stages consume.
// Eigenvectors themselves are not kept, only the per-set subvector norms of
// the top dim-1 of them (the structure statistic is sign-invariant, so norms
// lose nothing).
struct BootstrapEnsemble {
    int p_sets = 0;
    int dim = 0;
    int top_k = 0;                      // subvector norms kept for ranks 0..top_k-1
    Eigen::VectorXd observed_values;    // nP, descending
    Eigen::MatrixXd observed_subnorm2;  // top_k x P, squared per-set norms
    std::vector<Eigen::VectorXd> boot_values;
    std::vector<Eigen::MatrixXd> boot_subnorm2;
};

// Uniform-with-replacement index vector of length m, positions 0..m-1.
std::vector<int> resample_indices(int m, RngStream& rng);

// Column gather: out.col(j) = x.col(idx[j]).
Eigen::MatrixXd resample_columns(const Eigen::MatrixXd& x, const std::vector<int>& idx);

// One resample of the whole dataset: a single index vector applied to every
// block, preserving joint columns.
MultiDataset bootstrap_resample(const MultiDataset& data, RngStream& rng);

// Sum of squared deviations from one over the P eigenvalues after rank s
// (0-based: eigenvalue ranks s .. s+P-1).
double stat_dim(const Eigen::VectorXd& eigs, int s, int p_sets);

// Fraction of resamples whose statistic deviates from the observed statistic
// by at least the observed value.
double pvalue(double t_obs, const std::vector<double>& t_boot);

// Observed + B resampled coherence spectra, resample b on child stream b of
// RngStream(cfg.seed), so results are independent of evaluation order.
BootstrapEnsemble build_bootstrap_ensemble(const MultiDataset& data, const DetectConfig& cfg);

// Dimension test: smallest s in {0..n-1} whose null is retained; capped at
// n-1 when every hypothesis is rejected. Second element holds all p-values.
std::pair<int, std::vector<double>> corr_dim(const MultiDataset& data, const DetectConfig& cfg);

// Structure test for the top d_hat eigenvectors: a retained per-set null
// (p-value >= pfa) zeroes every pair column touching that set in that row.
std::pair<CorrelationMap, Eigen::MatrixXd> corr_struct(const MultiDataset& data, int d_hat,
                                                       const DetectConfig& cfg);

// Full pipeline sharing one bootstrap ensemble between the two stages
// (cfg.share_bootstrap = false draws a fresh ensemble for the structure
// stage from a derived stream).
DetectionReport run_detection(const MultiDataset& data, const DetectConfig& cfg);

}  // namespace mcorr
