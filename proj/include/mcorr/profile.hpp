#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "mcorr/pair_map.hpp"
#include "mcorr/sym_matrix.hpp"

namespace mcorr {

// Ground-truth correlation structure: for each of the n latent components an
// implicit P x P correlation block with unit diagonal; entry (p,q) is the
// correlation of that component between data sets p and q. All indices here
// are 0-based; file formats are 1-based (see io.hpp).
class CorrelationProfile {
  public:
    CorrelationProfile(int p_sets, int n_components);

    [[nodiscard]] int p_sets() const noexcept { return p_sets_; }
    [[nodiscard]] int n_components() const noexcept { return n_components_; }

    [[nodiscard]] double rho(int component, int p, int q) const;
    // value must lie in [0,1]; p == q is rejected (diagonal is fixed at 1).
    void set_rho(int component, int p, int q, double value);

    // The component's P x P correlation block.
    [[nodiscard]] SymMatrix r_block(int component) const;

    [[nodiscard]] bool component_active(int component) const;

    bool operator==(const CorrelationProfile&) const = default;

  private:
    void check_component(int component) const;

    int p_sets_;
    int n_components_;
    std::vector<double> rho_;  // n_components x pair_count(p_sets), row-major
};

struct DerivedOrders {
    int d = 0;              // components with any nonzero cross-set correlation
    int d_all = 0;          // components correlated across every pair
    Eigen::MatrixXi d_pq;   // per-pair component counts, P x P, zero diagonal
};
DerivedOrders derived_orders(const CorrelationProfile& profile);

// ((k-1)/k)^2: the per-edge lower bound above which a correlation clique of
// size k >= 4 is guaranteed to push exactly one eigenvalue above one.
double epsilon_threshold(int k);

// Connected groups (size >= 2) of the component's nonzero-correlation graph,
// each sorted ascending, groups ordered by smallest member.
std::vector<std::vector<int>> correlated_groups(const CorrelationProfile& profile, int component);

struct ComponentCheck {
    int component = 0;
    int k = 0;                     // largest correlated group size, 0 if none
    std::vector<int> group_sizes;
    bool psd = true;
    bool transitive = true;        // every group is a clique
    bool threshold_ok = true;      // edges of cliques with k >= 4 exceed epsilon_threshold
};

struct ValidationReport {
    std::vector<ComponentCheck> per_component;
    bool theorem_assumptions_met = true;    // psd && transitive && threshold_ok everywhere
    bool single_group_per_component = true; // multiple cliques inflate the eigenvalue count
    bool dim_margin_ok = true;              // d <= n-1, required by the dimension test's null
    int d = 0;
    int d_all = 0;
    std::vector<std::string> warnings;
};
// Never throws: violations are reported, not repaired.
ValidationReport validate_profile(const CorrelationProfile& profile);

struct CompositeCov {
    SymMatrix r_ss;         // covariance of the stacked signal, set-major order
    std::vector<int> perm;  // perm[j] = stacked index at block-diagonal position j
};
// Stacked-signal covariance of order nP plus the permutation under which it
// becomes blkdiag(R^(1), ..., R^(n)). Throws NotPSD if any block fails PSD.
CompositeCov composite_signal_cov(const CorrelationProfile& profile);

// Binary truth map, n rows, lexicographic pair columns.
GroundTruthMap ground_truth_map(const CorrelationProfile& profile);

}  // namespace mcorr
