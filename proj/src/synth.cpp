#include "mcorr/synth.hpp"

#include <cmath>

#include "mcorr/numerics.hpp"

namespace mcorr {

double snr_to_noise_var(double snr_db, double signal_var) {
    if (!(signal_var > 0.0)) throw InvalidInput("snr_to_noise_var: signal variance must be positive");
    if (std::isinf(snr_db) && snr_db > 0.0) return 0.0;
    return signal_var / std::pow(10.0, snr_db / 10.0);
}

MultiDataset generate(const GenConfig& cfg, RngStream& rng) {
    if (cfg.samples < 1) throw InvalidInput("generate: need at least one sample");
    const int p_sets = cfg.profile.p_sets();
    const int n = cfg.profile.n_components();
    const int m = cfg.samples;

    RngStream signal_rng = rng.child(0);
    RngStream mixing_rng = rng.child(1);
    RngStream noise_rng = rng.child(2);

    const CompositeCov cov = composite_signal_cov(cfg.profile);  // throws NotPSD
    const Eigen::MatrixXd stacked_signal = sample_gaussian(cov.r_ss, m, signal_rng);

    std::vector<Eigen::MatrixXd> mixing;
    mixing.reserve(p_sets);
    for (int p = 0; p < p_sets; ++p) {
        if (cfg.mixing == MixingKind::orthogonal) {
            mixing.push_back(random_orthogonal(n, mixing_rng));
        } else {
            // General invertible mixing: iid Gaussian entries, redrawn in the
            // measure-zero event of rank deficiency.
            Eigen::MatrixXd a(n, n);
            do {
                for (int j = 0; j < n; ++j) {
                    for (int i = 0; i < n; ++i) a(i, j) = mixing_rng.next_gaussian();
                }
            } while (Eigen::FullPivLU<Eigen::MatrixXd>(a).rank() < n);
            mixing.push_back(std::move(a));
        }
    }

    const double noise_sd = std::sqrt(snr_to_noise_var(cfg.snr_db));

    MultiDataset data;
    data.p_sets = p_sets;
    data.dim = n;
    data.samples = m;
    data.x_blocks.reserve(p_sets);
    for (int p = 0; p < p_sets; ++p) {
        Eigen::MatrixXd x = mixing[p] * stacked_signal.middleRows(p * n, n);
        // Noise is always drawn, even at sd 0, so the stream position (and
        // hence every other draw) is independent of the SNR setting.
        for (int j = 0; j < m; ++j) {
            for (int i = 0; i < n; ++i) x(i, j) += noise_sd * noise_rng.next_gaussian();
        }
        data.x_blocks.push_back(std::move(x));
    }
    data.truth = DatasetTruth{cfg.profile, std::move(mixing), cfg.snr_db, cfg.seed};
    return data;
}

MultiDataset generate(const GenConfig& cfg) {
    RngStream rng(cfg.seed);
    return generate(cfg, rng);
}

}  // namespace mcorr
