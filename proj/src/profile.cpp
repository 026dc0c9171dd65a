#include "mcorr/profile.hpp"

#include <algorithm>
#include <cmath>

#include "mcorr/numerics.hpp"

namespace mcorr {

CorrelationProfile::CorrelationProfile(int p_sets, int n_components)
    : p_sets_(p_sets), n_components_(n_components) {
    if (p_sets < 2) throw InvalidInput("CorrelationProfile: need at least two data sets");
    if (n_components < 1) throw InvalidInput("CorrelationProfile: need at least one component");
    rho_.assign(static_cast<std::size_t>(n_components) * pair_count(p_sets), 0.0);
}

void CorrelationProfile::check_component(int component) const {
    if (component < 0 || component >= n_components_) {
        throw InvalidInput("CorrelationProfile: component index out of range");
    }
}

double CorrelationProfile::rho(int component, int p, int q) const {
    check_component(component);
    if (p == q) return 1.0;
    return rho_[static_cast<std::size_t>(component) * pair_count(p_sets_) +
                pair_index(p, q, p_sets_)];
}

void CorrelationProfile::set_rho(int component, int p, int q, double value) {
    check_component(component);
    if (p == q) throw InvalidInput("set_rho: diagonal entries are fixed at 1");
    if (!(value >= 0.0 && value <= 1.0)) throw InvalidInput("set_rho: value outside [0,1]");
    rho_[static_cast<std::size_t>(component) * pair_count(p_sets_) +
         pair_index(p, q, p_sets_)] = value;
}

SymMatrix CorrelationProfile::r_block(int component) const {
    check_component(component);
    SymMatrix block = SymMatrix::identity(p_sets_);
    for (int p = 0; p < p_sets_; ++p) {
        for (int q = p + 1; q < p_sets_; ++q) block.set(p, q, rho(component, p, q));
    }
    return block;
}

bool CorrelationProfile::component_active(int component) const {
    check_component(component);
    for (int p = 0; p < p_sets_; ++p) {
        for (int q = p + 1; q < p_sets_; ++q) {
            if (rho(component, p, q) > 0.0) return true;
        }
    }
    return false;
}

DerivedOrders derived_orders(const CorrelationProfile& profile) {
    const int p_sets = profile.p_sets();
    DerivedOrders out;
    out.d_pq = Eigen::MatrixXi::Zero(p_sets, p_sets);
    for (int i = 0; i < profile.n_components(); ++i) {
        bool any = false;
        bool all = true;
        for (int p = 0; p < p_sets; ++p) {
            for (int q = p + 1; q < p_sets; ++q) {
                if (profile.rho(i, p, q) > 0.0) {
                    any = true;
                    out.d_pq(p, q) += 1;
                    out.d_pq(q, p) += 1;
                } else {
                    all = false;
                }
            }
        }
        if (any) out.d += 1;
        if (all) out.d_all += 1;
    }
    return out;
}

double epsilon_threshold(int k) {
    if (k < 2) throw InvalidInput("epsilon_threshold: clique size must be at least 2");
    const double ratio = static_cast<double>(k - 1) / k;
    return ratio * ratio;
}

std::vector<std::vector<int>> correlated_groups(const CorrelationProfile& profile, int component) {
    const int p_sets = profile.p_sets();
    std::vector<int> parent(p_sets);
    for (int p = 0; p < p_sets; ++p) parent[p] = p;
    const auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int p = 0; p < p_sets; ++p) {
        for (int q = p + 1; q < p_sets; ++q) {
            if (profile.rho(component, p, q) > 0.0) parent[find(p)] = find(q);
        }
    }
    std::vector<std::vector<int>> groups(p_sets);
    for (int p = 0; p < p_sets; ++p) groups[find(p)].push_back(p);
    std::vector<std::vector<int>> out;
    for (auto& g : groups) {
        if (g.size() >= 2) out.push_back(std::move(g));
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
}

ValidationReport validate_profile(const CorrelationProfile& profile) {
    ValidationReport report;
    const DerivedOrders orders = derived_orders(profile);
    report.d = orders.d;
    report.d_all = orders.d_all;

    for (int i = 0; i < profile.n_components(); ++i) {
        ComponentCheck check;
        check.component = i;
        const auto groups = correlated_groups(profile, i);
        for (const auto& g : groups) check.group_sizes.push_back(static_cast<int>(g.size()));
        check.k = check.group_sizes.empty()
                      ? 0
                      : *std::max_element(check.group_sizes.begin(), check.group_sizes.end());

        const EigenPairs eig = sym_eig(profile.r_block(i));
        check.psd = eig.values(eig.values.size() - 1) >= -1e-10 * std::max(1.0, eig.values(0));
        if (!check.psd) {
            report.warnings.push_back("component " + std::to_string(i + 1) +
                                      ": correlation block is not positive semidefinite");
        }

        for (const auto& g : groups) {
            bool clique = true;
            for (std::size_t a = 0; a < g.size() && clique; ++a) {
                for (std::size_t b = a + 1; b < g.size(); ++b) {
                    if (profile.rho(i, g[a], g[b]) <= 0.0) {
                        clique = false;
                        break;
                    }
                }
            }
            if (!clique) {
                check.transitive = false;
                continue;
            }
            if (g.size() >= 4) {
                const double eps = epsilon_threshold(static_cast<int>(g.size()));
                for (std::size_t a = 0; a < g.size(); ++a) {
                    for (std::size_t b = a + 1; b < g.size(); ++b) {
                        if (profile.rho(i, g[a], g[b]) <= eps) check.threshold_ok = false;
                    }
                }
            }
        }
        if (!check.transitive) {
            report.warnings.push_back("component " + std::to_string(i + 1) +
                                      ": correlation pattern is not transitive (not a disjoint "
                                      "union of cliques); eigenvalue-count guarantee is void");
        }
        if (!check.threshold_ok) {
            report.warnings.push_back(
                "component " + std::to_string(i + 1) +
                ": a clique of size >= 4 has a correlation at or below ((k-1)/k)^2; the "
                "one-eigenvalue-above-one guarantee may not apply");
        }
        if (check.group_sizes.size() > 1) {
            report.single_group_per_component = false;
            report.warnings.push_back(
                "component " + std::to_string(i + 1) +
                ": multiple disjoint correlated groups; each contributes an eigenvalue above "
                "one, so the count exceeds the number of correlated components");
        }
        report.theorem_assumptions_met =
            report.theorem_assumptions_met && check.psd && check.transitive && check.threshold_ok;
        report.per_component.push_back(std::move(check));
    }

    report.dim_margin_ok = orders.d <= profile.n_components() - 1;
    if (!report.dim_margin_ok) {
        report.warnings.push_back(
            "profile has d = " + std::to_string(orders.d) + " > n-1 = " +
            std::to_string(profile.n_components() - 1) +
            "; the dimension estimate is capped at n-1 and cannot reach the true d");
    }
    return report;
}

CompositeCov composite_signal_cov(const CorrelationProfile& profile) {
    const int p_sets = profile.p_sets();
    const int n = profile.n_components();
    const int order = n * p_sets;

    for (int i = 0; i < n; ++i) {
        const EigenPairs eig = sym_eig(profile.r_block(i));
        if (eig.values(eig.values.size() - 1) < -1e-10 * std::max(1.0, eig.values(0))) {
            throw NotPSD("composite_signal_cov: component " + std::to_string(i + 1) +
                         " block is not positive semidefinite");
        }
    }

    CompositeCov out{SymMatrix(order), {}};
    // Stacked (set-major) coordinates: component i of set p sits at p*n + i.
    // Distinct components are uncorrelated, so only same-i entries are nonzero.
    for (int p = 0; p < p_sets; ++p) {
        for (int q = p; q < p_sets; ++q) {
            for (int i = 0; i < n; ++i) {
                const double value = (p == q) ? 1.0 : profile.rho(i, p, q);
                out.r_ss.set(p * n + i, q * n + i, value);
            }
        }
    }
    // Block-diagonal position j = i*P + p pulls from stacked index p*n + i.
    out.perm.resize(order);
    for (int i = 0; i < n; ++i) {
        for (int p = 0; p < p_sets; ++p) out.perm[i * p_sets + p] = p * n + i;
    }
    return out;
}

GroundTruthMap ground_truth_map(const CorrelationProfile& profile) {
    GroundTruthMap map(profile.n_components(), profile.p_sets());
    for (int i = 0; i < profile.n_components(); ++i) {
        for (int p = 0; p < profile.p_sets(); ++p) {
            for (int q = p + 1; q < profile.p_sets(); ++q) {
                if (profile.rho(i, p, q) > 0.0) map.set(i, pair_index(p, q, profile.p_sets()), 1);
            }
        }
    }
    return map;
}

}  // namespace mcorr
