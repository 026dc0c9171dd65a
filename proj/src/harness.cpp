#include "mcorr/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "mcorr/svg.hpp"

namespace mcorr {
namespace {

// Best injective assignment of the smaller row set into the larger one,
// maximizing total cell agreement. Exhaustive; first maximum in enumeration
// order wins, which makes the result deterministic.
std::vector<int> best_assignment(const Eigen::MatrixXi& agreement) {
    const int small = static_cast<int>(agreement.rows());
    const int large = static_cast<int>(agreement.cols());
    std::vector<int> current(small, -1), best(small, -1);
    std::vector<bool> used(large, false);
    int best_score = -1;

    const auto recurse = [&](auto&& self, int row, int score) -> void {
        if (row == small) {
            if (score > best_score) {
                best_score = score;
                best = current;
            }
            return;
        }
        for (int target = 0; target < large; ++target) {
            if (used[target]) continue;
            used[target] = true;
            current[row] = target;
            self(self, row + 1, score + agreement(row, target));
            used[target] = false;
        }
    };
    recurse(recurse, 0, 0);
    return best;
}

}  // namespace

MapScore score_map(const CorrelationMap& estimated, const GroundTruthMap& truth) {
    if (truth.rows < 1) throw InvalidInput("score_map: truth map needs at least one row");
    if (estimated.rows > 0 && estimated.p_sets != truth.p_sets) {
        throw InvalidInput("score_map: pair-column conventions differ");
    }
    const int cols = truth.cols();

    MapScore score;
    score.cell_hits = Eigen::MatrixXd::Zero(truth.rows, cols);
    score.assignment.assign(estimated.rows, -1);

    int est_ones = 0, truth_ones = 0;
    for (const auto v : estimated.cells) est_ones += v;
    for (const auto v : truth.cells) truth_ones += v;

    if (estimated.rows > 0) {
        const bool est_small = estimated.rows <= truth.rows;
        const int small = est_small ? estimated.rows : truth.rows;
        const int large = est_small ? truth.rows : estimated.rows;
        Eigen::MatrixXi agreement(small, large);
        for (int a = 0; a < small; ++a) {
            for (int b = 0; b < large; ++b) {
                const int er = est_small ? a : b;
                const int tr = est_small ? b : a;
                int agree = 0;
                for (int c = 0; c < cols; ++c) {
                    agree += estimated.at(er, c) == truth.at(tr, c) ? 1 : 0;
                }
                agreement(a, b) = agree;
            }
        }
        const std::vector<int> assigned = best_assignment(agreement);
        for (int a = 0; a < small; ++a) {
            const int er = est_small ? a : assigned[a];
            const int tr = est_small ? assigned[a] : a;
            score.assignment[er] = tr;
            for (int c = 0; c < cols; ++c) {
                score.cell_hits(tr, c) = estimated.at(er, c);
                if (estimated.at(er, c) == 1 && truth.at(tr, c) == 1) score.tp += 1;
            }
        }
    }
    score.fp = est_ones - score.tp;    // includes every 1 of an unassigned estimated row
    score.fn = truth_ones - score.tp;  // includes every 1 of an unassigned truth row
    score.precision = (score.tp + score.fp == 0)
                          ? 1.0
                          : static_cast<double>(score.tp) / (score.tp + score.fp);
    score.recall = (score.tp + score.fn == 0)
                       ? 1.0
                       : static_cast<double>(score.tp) / (score.tp + score.fn);
    return score;
}

int estimate_dall(const CorrelationMap& map) {
    int count = 0;
    for (int r = 0; r < map.rows; ++r) {
        if (map.row_all_ones(r)) count += 1;
    }
    return count;
}

std::vector<MetricsRecord> run_scenario(const ScenarioConfig& cfg) {
    if (cfg.trials < 1) throw InvalidInput("run_scenario: trials must be >= 1");
    if (cfg.samples < 2) throw InvalidInput("run_scenario: samples must be >= 2");
    if (cfg.snr_grid.empty()) throw InvalidInput("run_scenario: snr_grid must be nonempty");
    const bool rho_sweep = !cfg.rho_grid.empty();
    if (rho_sweep && cfg.snr_grid.size() != 1) {
        throw InvalidInput("run_scenario: a rho sweep requires a single SNR point");
    }
    if (rho_sweep && cfg.rho_targets.empty()) {
        throw InvalidInput("run_scenario: a rho sweep requires rho_targets");
    }

    const std::size_t n_points = rho_sweep ? cfg.rho_grid.size() : cfg.snr_grid.size();
    std::vector<MetricsRecord> records;
    records.reserve(n_points);

    for (std::size_t point = 0; point < n_points; ++point) {
        const double snr_db = rho_sweep ? cfg.snr_grid.front() : cfg.snr_grid[point];
        CorrelationProfile profile = cfg.profile;
        MetricsRecord rec;
        rec.snr_db = snr_db;
        if (rho_sweep) {
            rec.rho = cfg.rho_grid[point];
            rec.sweep_point = rec.rho;
            for (const auto& [component, p, q] : cfg.rho_targets) {
                profile.set_rho(component, p, q, rec.rho);
            }
        } else {
            rec.sweep_point = snr_db;
        }

        const DerivedOrders orders = derived_orders(profile);
        const GroundTruthMap truth = ground_truth_map(profile);
        rec.cell_accuracy = Eigen::MatrixXd::Zero(truth.rows, truth.cols());
        rec.trials = cfg.trials;

        GenConfig gen_cfg;
        gen_cfg.profile = profile;
        gen_cfg.snr_db = snr_db;
        gen_cfg.samples = cfg.samples;
        gen_cfg.mixing = cfg.mixing;

        const RngStream master(cfg.seed);
        for (int t = 0; t < cfg.trials; ++t) {
            // Seeds depend only on (master seed, trial), never on the sweep
            // point, so a sweep reuses each trial's signal/mixing draws.
            const RngStream trial = master.child(static_cast<std::uint64_t>(t));
            RngStream gen_rng = trial.child(0);
            gen_cfg.seed = gen_rng.key();
            const MultiDataset data = generate(gen_cfg, gen_rng);

            DetectConfig det = cfg.detect;
            det.seed = trial.child(1).key();
            const DetectionReport report = run_detection(data, det);

            rec.acc_d += report.d_hat == orders.d ? 1.0 : 0.0;
            rec.acc_dall += estimate_dall(report.map) == orders.d_all ? 1.0 : 0.0;
            const MapScore score = score_map(report.map, truth);
            rec.precision += score.precision;
            rec.recall += score.recall;
            rec.cell_accuracy += score.cell_hits;
        }
        rec.acc_d /= cfg.trials;
        rec.acc_dall /= cfg.trials;
        rec.precision /= cfg.trials;
        rec.recall /= cfg.trials;
        rec.cell_accuracy /= cfg.trials;
        records.push_back(std::move(rec));
    }
    return records;
}

namespace {

std::string format_g6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

void emit_csv(const std::vector<MetricsRecord>& records, const std::string& path) {
    if (records.empty()) throw InvalidInput("emit_csv: no records");
    std::ofstream out(path);
    if (!out) throw IoError("emit_csv: cannot open " + path);
    out << "sweep,acc_d,acc_dall,precision,recall\n";
    for (const auto& rec : records) {
        out << format_g6(rec.sweep_point) << ',' << format_g6(rec.acc_d) << ','
            << format_g6(rec.acc_dall) << ',' << format_g6(rec.precision) << ','
            << format_g6(rec.recall) << '\n';
    }
    if (!out.good()) throw IoError("emit_csv: write failed for " + path);
}

void emit_heatmap(const Eigen::MatrixXd& cell_accuracy, const std::string& path) {
    const int cols = static_cast<int>(cell_accuracy.cols());
    int p_sets = 2;
    while (pair_count(p_sets) < cols) ++p_sets;
    if (pair_count(p_sets) != cols) {
        throw InvalidInput("emit_heatmap: column count is not a pair count");
    }
    std::vector<std::string> row_labels, col_labels;
    for (int r = 0; r < cell_accuracy.rows(); ++r) row_labels.push_back(std::to_string(r + 1));
    for (int c = 0; c < cols; ++c) {
        const auto [p, q] = pair_at(c, p_sets);
        col_labels.push_back(pair_label(p, q));
    }
    std::ofstream out(path);
    if (!out) throw IoError("emit_heatmap: cannot open " + path);
    out << render_heatmap_svg(cell_accuracy, row_labels, col_labels);
    if (!out.good()) throw IoError("emit_heatmap: write failed for " + path);
}

}  // namespace mcorr
