#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "mcorr/profile.hpp"
#include "mcorr/rng.hpp"

namespace mcorr {

enum class MixingKind { orthogonal, gaussian };

struct GenConfig {
    CorrelationProfile profile{2, 1};
    double snr_db = 0.0;  // may be +infinity for noise-free data
    int samples = 0;
    std::uint64_t seed = 0;
    MixingKind mixing = MixingKind::orthogonal;
};

struct DatasetTruth {
    CorrelationProfile profile{2, 1};
    std::vector<Eigen::MatrixXd> mixing;  // empty when unknown (e.g. loaded from disk)
    double snr_db = 0.0;
    std::uint64_t seed = 0;
};

struct MultiDataset {
    int p_sets = 0;
    int dim = 0;      // n, identical across sets
    int samples = 0;  // M; column m across blocks is one joint sample
    std::vector<Eigen::MatrixXd> x_blocks;  // P blocks, each dim x samples
    std::optional<DatasetTruth> truth;
};

// Per-entry noise variance for a target SNR in dB at the given signal variance.
double snr_to_noise_var(double snr_db, double signal_var = 1.0);

// x_p = A_p s_p + noise. Signals are jointly Gaussian with the profile's
// composite covariance; mixing is Haar-orthogonal (or invertible Gaussian);
// noise is white with variance snr_to_noise_var(cfg.snr_db).
//
// Stream discipline: signals, mixing, and noise are drawn from child streams
// 0, 1, 2 of `rng`, so the same seed reuses the same signal and mixing
// realizations across an SNR sweep (only the noise scale changes).
MultiDataset generate(const GenConfig& cfg, RngStream& rng);

// Convenience overload seeding the stream from cfg.seed.
MultiDataset generate(const GenConfig& cfg);

}  // namespace mcorr
