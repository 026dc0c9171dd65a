#include "mcorr/detect.hpp"

#include <cmath>

#include "mcorr/coherence.hpp"

namespace mcorr {
namespace {

constexpr std::uint64_t kStructStreamSalt = 0xA5A5A5A55A5A5A5AULL;

void check_config(const DetectConfig& cfg) {
    if (cfg.bootstraps < 1) throw InvalidInput("detect: bootstraps must be >= 1");
    if (!(cfg.pfa > 0.0 && cfg.pfa < 1.0)) throw InvalidInput("detect: pfa must lie in (0,1)");
}

Eigen::MatrixXd stack_blocks(const MultiDataset& data) {
    if (data.p_sets < 2) throw InvalidInput("detect: need at least two data sets");
    if (static_cast<int>(data.x_blocks.size()) != data.p_sets) {
        throw InvalidInput("detect: block count mismatch");
    }
    Eigen::MatrixXd x(data.p_sets * data.dim, data.samples);
    for (int p = 0; p < data.p_sets; ++p) {
        if (data.x_blocks[p].rows() != data.dim || data.x_blocks[p].cols() != data.samples) {
            throw InvalidInput("detect: block shape mismatch");
        }
        x.middleRows(p * data.dim, data.dim) = data.x_blocks[p];
    }
    return x;
}

struct StackEig {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
};

// Must stay arithmetically identical to sample_coherence: same normalization,
// same symmetrization, same clamp.
StackEig eig_of_stack(const Eigen::MatrixXd& x, int p_sets, int dim, double rel_tol) {
    Eigen::MatrixXd c = coherence_from_stack(x, p_sets, dim, rel_tol);
    c = 0.5 * (c + c.transpose()).eval();
    EigenPairs eig = sym_eig(SymMatrix::from_dense(c, 1e-6));
    return {eig.values.cwiseMax(0.0), std::move(eig.vectors)};
}

Eigen::MatrixXd subvector_norms2(const Eigen::MatrixXd& vectors, int p_sets, int dim, int top_k) {
    Eigen::MatrixXd out(top_k, p_sets);
    for (int k = 0; k < top_k; ++k) {
        for (int p = 0; p < p_sets; ++p) {
            out(k, p) = vectors.col(k).segment(p * dim, dim).squaredNorm();
        }
    }
    return out;
}

BootstrapEnsemble build_ensemble_seeded(const MultiDataset& data, const DetectConfig& cfg,
                                        std::uint64_t seed) {
    check_config(cfg);
    const Eigen::MatrixXd x = stack_blocks(data);

    BootstrapEnsemble ens;
    ens.p_sets = data.p_sets;
    ens.dim = data.dim;
    ens.top_k = std::max(data.dim - 1, 0);

    StackEig observed = eig_of_stack(x, data.p_sets, data.dim, cfg.cov_rel_tol);
    ens.observed_values = std::move(observed.values);
    ens.observed_subnorm2 = subvector_norms2(observed.vectors, ens.p_sets, ens.dim, ens.top_k);

    const RngStream root(seed);
    ens.boot_values.reserve(cfg.bootstraps);
    ens.boot_subnorm2.reserve(cfg.bootstraps);
    for (int b = 0; b < cfg.bootstraps; ++b) {
        RngStream stream = root.child(static_cast<std::uint64_t>(b));
        const std::vector<int> idx = resample_indices(data.samples, stream);
        StackEig boot = eig_of_stack(resample_columns(x, idx), data.p_sets, data.dim,
                                     cfg.cov_rel_tol);
        ens.boot_values.push_back(std::move(boot.values));
        ens.boot_subnorm2.push_back(
            subvector_norms2(boot.vectors, ens.p_sets, ens.dim, ens.top_k));
    }
    return ens;
}

std::pair<int, std::vector<double>> corr_dim_from_ensemble(const BootstrapEnsemble& ens,
                                                           const DetectConfig& cfg) {
    const int n = ens.dim;
    std::vector<double> pvalues(n);
    std::vector<double> t_boot(ens.boot_values.size());
    int d_hat = n - 1;
    bool retained = false;
    for (int s = 0; s < n; ++s) {
        const double t_obs = stat_dim(ens.observed_values, s, ens.p_sets);
        for (std::size_t b = 0; b < ens.boot_values.size(); ++b) {
            t_boot[b] = stat_dim(ens.boot_values[b], s, ens.p_sets);
        }
        pvalues[s] = pvalue(t_obs, t_boot);
        if (!retained && pvalues[s] >= cfg.pfa) {
            d_hat = s;
            retained = true;
        }
    }
    return {d_hat, std::move(pvalues)};
}

std::pair<CorrelationMap, Eigen::MatrixXd> corr_struct_from_ensemble(const BootstrapEnsemble& ens,
                                                                     int d_hat,
                                                                     const DetectConfig& cfg) {
    if (d_hat < 0 || d_hat > std::max(ens.dim - 1, 0)) {
        throw InvalidInput("corr_struct: d_hat out of range");
    }
    CorrelationMap map(d_hat, ens.p_sets, 1);
    Eigen::MatrixXd pvalues(d_hat, ens.p_sets);
    std::vector<double> t_boot(ens.boot_subnorm2.size());
    for (int i = 0; i < d_hat; ++i) {
        for (int p = 0; p < ens.p_sets; ++p) {
            const double t_obs = ens.observed_subnorm2(i, p);
            for (std::size_t b = 0; b < ens.boot_subnorm2.size(); ++b) {
                t_boot[b] = ens.boot_subnorm2[b](i, p);
            }
            pvalues(i, p) = pvalue(t_obs, t_boot);
            if (pvalues(i, p) >= cfg.pfa) {
                // Set p is not part of this component: no pair involving p.
                for (int q = 0; q < ens.p_sets; ++q) {
                    if (q != p) map.set(i, pair_index(p, q, ens.p_sets), 0);
                }
            }
        }
    }
    return {std::move(map), std::move(pvalues)};
}

}  // namespace

std::vector<int> resample_indices(int m, RngStream& rng) {
    if (m < 1) throw InvalidInput("resample_indices: need at least one sample");
    std::vector<int> idx(m);
    for (int j = 0; j < m; ++j) {
        idx[j] = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(m)));
    }
    return idx;
}

Eigen::MatrixXd resample_columns(const Eigen::MatrixXd& x, const std::vector<int>& idx) {
    Eigen::MatrixXd out(x.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j) {
        if (idx[j] < 0 || idx[j] >= x.cols()) {
            throw InvalidInput("resample_columns: index out of range");
        }
        out.col(static_cast<Eigen::Index>(j)) = x.col(idx[j]);
    }
    return out;
}

MultiDataset bootstrap_resample(const MultiDataset& data, RngStream& rng) {
    const std::vector<int> idx = resample_indices(data.samples, rng);
    MultiDataset out = data;
    for (int p = 0; p < data.p_sets; ++p) {
        out.x_blocks[p] = resample_columns(data.x_blocks[p], idx);
    }
    return out;
}

double stat_dim(const Eigen::VectorXd& eigs, int s, int p_sets) {
    if (s < 0 || p_sets < 1 || s + p_sets > eigs.size()) {
        throw InvalidInput("stat_dim: rank window out of range");
    }
    double t = 0.0;
    for (int i = s; i < s + p_sets; ++i) t += (eigs(i) - 1.0) * (eigs(i) - 1.0);
    return t;
}

double pvalue(double t_obs, const std::vector<double>& t_boot) {
    if (t_boot.empty()) throw InvalidInput("pvalue: need at least one resample");
    int hits = 0;
    for (const double t : t_boot) {
        if (std::abs(t - t_obs) >= t_obs) hits += 1;
    }
    return static_cast<double>(hits) / static_cast<double>(t_boot.size());
}

BootstrapEnsemble build_bootstrap_ensemble(const MultiDataset& data, const DetectConfig& cfg) {
    return build_ensemble_seeded(data, cfg, cfg.seed);
}

std::pair<int, std::vector<double>> corr_dim(const MultiDataset& data, const DetectConfig& cfg) {
    return corr_dim_from_ensemble(build_bootstrap_ensemble(data, cfg), cfg);
}

std::pair<CorrelationMap, Eigen::MatrixXd> corr_struct(const MultiDataset& data, int d_hat,
                                                       const DetectConfig& cfg) {
    return corr_struct_from_ensemble(build_bootstrap_ensemble(data, cfg), d_hat, cfg);
}

DetectionReport run_detection(const MultiDataset& data, const DetectConfig& cfg) {
    const BootstrapEnsemble ens = build_bootstrap_ensemble(data, cfg);

    DetectionReport report;
    auto [d_hat, pvalues_dim] = corr_dim_from_ensemble(ens, cfg);
    report.d_hat = d_hat;
    report.pvalues_dim = std::move(pvalues_dim);
    // d_hat is the first retained rank, so a rejected final p-value at the cap
    // means no rank was retained at all.
    if (report.d_hat == ens.dim - 1 && report.pvalues_dim.back() < cfg.pfa) {
        report.diagnostics.push_back("all dimension nulls rejected; estimate capped at n-1 = " +
                                     std::to_string(ens.dim - 1));
    }

    for (int r = 0; r + 1 < ens.observed_values.size(); ++r) {
        if (ens.observed_values(r) <= 1.0 + 1e-9) break;
        if (ens.observed_values(r + 1) > 1.0 + 1e-9 &&
            ens.observed_values(r) - ens.observed_values(r + 1) < cfg.eig_tol) {
            report.diagnostics.push_back(
                "observed eigenvalues at ranks " + std::to_string(r) + "," +
                std::to_string(r + 1) + " are within eig_tol; structure rows may mix components");
        }
    }

    if (report.d_hat >= 2) {
        int unstable = 0;
        for (const auto& values : ens.boot_values) {
            for (int r = 0; r + 1 < report.d_hat; ++r) {
                if (values(r) - values(r + 1) < cfg.eig_tol) {
                    unstable += 1;
                    break;
                }
            }
        }
        if (unstable > 0) {
            report.diagnostics.push_back(
                std::to_string(unstable) + " of " + std::to_string(cfg.bootstraps) +
                " resamples have near-degenerate leading eigenvalues (rank matching unstable)");
        }
    }

    if (cfg.share_bootstrap) {
        auto [map, pvalues_struct] = corr_struct_from_ensemble(ens, report.d_hat, cfg);
        report.map = std::move(map);
        report.pvalues_struct = std::move(pvalues_struct);
    } else {
        const BootstrapEnsemble ens2 =
            build_ensemble_seeded(data, cfg, cfg.seed ^ kStructStreamSalt);
        auto [map, pvalues_struct] = corr_struct_from_ensemble(ens2, report.d_hat, cfg);
        report.map = std::move(map);
        report.pvalues_struct = std::move(pvalues_struct);
    }
    return report;
}

}  // namespace mcorr
